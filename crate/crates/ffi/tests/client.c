#include <stdio.h>
#include "plap.h"

int main(void) {
  PlapGraph *g = NULL;
  if (plap_graph_tadpole(4, 3, &g) != PLAP_STATUS_OK) return 1;

  PlapSolverOptions opts = plap_solver_options_default(2.0);
  PlapEigenResult *r = NULL;
  if (plap_first_eigenpair(g, &opts, &r) != PLAP_STATUS_OK) return 2;

  uint64_t num = 0, den = 0;
  if (plap_cheeger(g, &num, &den) != PLAP_STATUS_OK) return 3;

  double f[4];
  if (plap_eigen_function(r, f, 4) != PLAP_STATUS_OK) return 4;

  PlapGraph *bad = NULL;
  if (plap_graph_tadpole(3, 3, &bad) == PLAP_STATUS_OK || plap_last_error() == NULL) return 5;

  printf("lambda %.6f h %llu/%llu ok\n", plap_eigen_lambda(r),
         (unsigned long long)num, (unsigned long long)den);
  plap_eigen_free(r);
  plap_graph_free(g);
  return 0;
}
