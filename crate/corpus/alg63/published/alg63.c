void partition(int A[], int M, int N, int* i, int* j){
/* Makes X a random element of A[M..N] and permutes this
   segment in such a way that
     M <= J < I <= N provided M < N
     A[R] <= X for M <= R <= J
     A[R]  = X for J < R < I
     A[R] >= X for I <= R <= N
*/
  int I = *i; int J = *j; // using Hoare's I and J from now on
  int X; int F;
  F = rndm(M,N); X = A[F];
  I = M; J = N;
up: for(; I <= N; ++I)
      if (X < A[I]) goto down;
  I = N;
down: for(; J >= M; --J)
      if (X > A[J]) goto change;
  J = M;
change: if (I<J) { exchange(A, I, J);
                     ++I; --J;
                     goto up;
                 }
  else  if (I < F) {exchange(A, I, F); ++I;}
  else  if (F < J) {exchange(A, F, J); --J;}
  *i = I; *j = J;
}
void quicksort(int A[], int M, int N) { // sorts A[M..N]
  int I, J;
  if (M<N) { partition(A, M, N, &I, &J);
             quicksort(A, M, J);
             quicksort(A, I, N);
           }
}
