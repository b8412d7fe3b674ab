#include "contact_index.h"
#include <math.h>
#include <stdio.h>
#include <string.h>

/* τ(vacuum) = 1 on both exact routes, error codes on bad input. */
int main(void) {
    CiSymbol *s = NULL;
    if (ci_symbol_parse("2*exp(-Q)", 1, 4, NULL, &s) != CI_STATUS_OK) {
        fprintf(stderr, "parse: %s\n", ci_last_error());
        return 1;
    }
    CiComplex a, b;
    if (ci_symbol_tau(s, CI_ROUTE_HEAT_CLOSED_FORM, &a) != CI_STATUS_OK ||
        ci_symbol_tau(s, CI_ROUTE_FOCK, &b) != CI_STATUS_OK) {
        fprintf(stderr, "tau: %s\n", ci_last_error());
        return 1;
    }
    ci_symbol_free(s);
    if (fabs(a.re - 1.0) > 1e-12 || fabs(b.re - 1.0) > 1e-12) {
        fprintf(stderr, "tau = %g, %g\n", a.re, b.re);
        return 1;
    }
    if (ci_symbol_parse("Q +", 1, 4, NULL, &s) != CI_STATUS_PARSE || strlen(ci_last_error()) == 0) {
        return 1;
    }
    if (ci_symbol_tau(NULL, CI_ROUTE_FOCK, &a) != CI_STATUS_NULL_ARGUMENT) {
        return 1;
    }
    printf("ok %s\n", ci_version());
    return 0;
}
