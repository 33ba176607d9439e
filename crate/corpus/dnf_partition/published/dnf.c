void partition(int a[], int m, int n, int* i, int* j){
  int X; int F;
  F = rndm(m,n); X = a[F];
  int f=m; int s=f, t=n+1; goto A;
A: /* m<=k<f => a[k]=red &
      f<=k<s =>  a[k]=white
      s<=k<t => a[k] unknown
      t<=k<n+1 => a[k]=blue
      m<=f & f<=s & s<=t+1 & t<=n+1
   */
   if (s == t) { *j = f-1; *i = t; return; }
   if (s <  t) goto B;
   assert(0);
B: // A & s<t
   if (a[s] < X) {swap(a,f,s); ++f; ++s; goto A; }
   if (a[s] == X) { ++s; goto A; }
   if (a[s] > X) { --t; swap(a,s,t); goto A; }
   assert(0);
}
