void partition(int A[], int* ip, int* jp, int m, int n){
  int r, f; int i, j;
  f = (m+n)/2; r = A[f]; i = m; j = n;
  while (i <= j) {
    while (A[i]<r) ++i;
    while (A[j]>r) --j;
    if (i <= j) { swap(A, i, j); ++i; --j; }
  }
  *ip = i; *jp = j;
}
void Quicksort(int A[], int m, int n) {
  int i, j;
  if (m<n) {
    partition(A, &i, &j, m, n);
    Quicksort(A, m, j);
    Quicksort(A, i, n);
  }
}
