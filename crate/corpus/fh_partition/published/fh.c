void partition(int a[], int* Ip, int* Jp, int m, int n){
  int r; int i,j;
S: r = (a[m]+a[n])/2 ; i = m; j = n; goto A;
H: *Ip = i; *Jp = j; return;
A: if (i == j) { goto F; }
   if (i  < j) { goto B; }
   assert(0);
B: if (a[i]  < r) { ++i; goto A; }
   if (a[i] >= r) { goto C; }
   assert(0);
C: if (a[j]  > r) { --j; goto D; }
   if (a[j] <= r) { swap(a,i,j); ++i; --j; goto E; }
   assert(0);
D: if (i == j) { goto F; }
   if (i  < j) { goto C; }
   assert(0);
E: if (i  > j) { goto H; }
   if (i <= j) { goto A; }
   assert(0);
F: if (a[i] <= r) { ++i; goto H; }
   if (a[j] >= r) { --j; goto H; }
   assert(0);
}
void Quicksort(int A[], int m, int n) {
  int i, j;
  if (m<n) {
    partition(A, &i, &j, m, n);
    Quicksort(A, m, j);
    Quicksort(A, i, n);
  }
}
