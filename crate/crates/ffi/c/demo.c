/* Minimal consumer of the C API: runs "ms1" and prints the final errors. */
#include <stdio.h>
#include "nls_fem.h"

int main(void) {
    NlsRunParams params = {"ms1", 1, 64, 64, 0.0, 0, 0};
    NlsSolver *solver = NULL;
    if (nls_solver_new(&params, &solver) != NLS_STATUS_OK ||
        nls_solver_advance(solver) != NLS_STATUS_OK) {
        char msg[256];
        nls_last_error_message(msg, sizeof msg);
        fprintf(stderr, "error: %s\n", msg);
        nls_solver_free(solver);
        return 1;
    }
    double e0, e1;
    nls_solver_errors(solver, &e0, &e1);
    printf("err_l2 = %.6e  err_h1 = %.6e\n", e0, e1);

    NlsRunParams bad = {"nope", 1, 8, 8, 0.0, 0, 0};
    NlsSolver *other = NULL;
    NlsStatus st = nls_solver_new(&bad, &other);
    char msg[256];
    nls_last_error_message(msg, sizeof msg);
    printf("bad case -> status %d (%s)\n", (int)st, msg);

    nls_solver_free(solver);
    return 0;
}
