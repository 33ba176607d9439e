#include <assert.h>
void emit(double v);

void egyptian(int n, double a){
  double z;
/* S: n = n0 & a = a0 & n0 > 0 */
S: goto A;
/* A: n0 * a0 = n * a & n > 0 */
A: if (n % 2 == 0) { a = a+a; n = n/2; goto A; }
   if (n % 2 != 0) { goto B; }
   assert(0);
/* B: A & odd(n) */
B: if (n == 1) { emit(a); goto H; }
   if (n != 1) { z = a; a = a+a; n = (n-1)/2; goto C; }
   assert(0);
/* C: n0 * a0 = z + n * a & n > 0 */
C: if (n % 2 != 0) { goto D; }
   if (n % 2 == 0) { a = a+a; n = n/2; goto C; }
   assert(0);
/* D: C & odd(n) */
D: if (n == 1) { emit(z+a); goto H; }
   if (n > 1) { z = z+a; a = a+a; n = (n-1)/2; goto C; }
   assert(0);
/* H: printed(n0 * a0) */
H: return;
}
