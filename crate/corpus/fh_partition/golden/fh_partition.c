#include <assert.h>
void swap(int a[], int i, int j);

void partition(int a[], int* Ip, int* Jp, int m, int n){
  int r; int i,j;
/* S: m < n & alloc(a, m, n) & a = a0 */
S: r = (a[m]+a[n])/2; i = m; j = n; goto A;
/* H: perm(a, a0) & alloc(a, m, n) & m <= i & i <= n + 1 & i = j + 1 & seg(a, m, j, <=, r) & seg(a, i, n, >=, r) */
H: *Ip = i; *Jp = j; return;
/* A: perm(a, a0) & alloc(a, m, n) & m <= i & i <= j & j <= n & seg(a, m, i - 1, <=, r) & seg(a, j + 1, n, >=, r) */
A: if (i == j) { goto F; }
   if (i < j) { goto B; }
   assert(0);
/* B: A & i < j */
B: if (a[i] < r) { ++i; goto A; }
   if (a[i] >= r) { goto C; }
   assert(0);
/* C: B & a[i] >= r & i < j */
C: if (a[j] > r) { --j; goto D; }
   if (a[j] <= r) { swap(a, i, j); ++i; --j; goto E; }
   assert(0);
/* D: A & a[i] >= r & i <= j */
D: if (i == j) { goto F; }
   if (i < j) { goto C; }
   assert(0);
/* E: perm(a, a0) & alloc(a, m, n) & m <= i & i <= j + 1 & j + 1 <= n + 1 & seg(a, m, i - 1, <=, r) & seg(a, j + 1, n, >=, r) */
E: if (i > j) { goto H; }
   if (i <= j) { goto A; }
   assert(0);
/* F: A & i = j */
F: if (a[i] <= r) { ++i; goto H; }
   if (a[j] >= r) { --j; goto H; }
   assert(0);
}
