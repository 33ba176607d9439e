#include <assert.h>
void swap(int a[], int i, int j);

void partition(int a[], int m, int n, int X, int* i, int* j){
  int f,s,t;
/* S: m <= n & alloc(a, m, n) & a = a0 */
S: f = m; s = f; t = n+1; goto A;
/* H: perm(a, a0) & alloc(a, m, n) & m <= f & f <= t & t <= n + 1 & seg(a, m, f - 1, <, X) & seg(a, f, t - 1, =, X) & seg(a, t, n, >, X) & j = f - 1 & i = t */
H: return;
/* A: s <= t & perm(a, a0) & alloc(a, m, n) & m <= f & f <= s & s <= t & t <= n + 1 & seg(a, m, f - 1, <, X) & seg(a, f, s - 1, =, X) & seg(a, t, n, >, X) */
A: if (s == t) { *j = f-1; *i = t; return; }
   if (s < t) { goto B; }
   assert(0);
/* B: A & s < t */
B: if (a[s] < X) { swap(a, f, s); ++f; ++s; goto A; }
   if (a[s] == X) { ++s; goto A; }
   if (a[s] > X) { --t; swap(a, s, t); goto A; }
   assert(0);
}
