#include <stdio.h>
#include <string.h>

#include "fractalis.h"

#define CHECK(cond)                                              \
    do {                                                         \
        if (!(cond)) {                                           \
            fprintf(stderr, "check failed: %s (line %d)\n", #cond, __LINE__); \
            return 1;                                            \
        }                                                        \
    } while (0)

int main(void) {
    char *version = fractalis_version();
    CHECK(version != NULL && strlen(version) > 0);
    fractalis_string_free(version);

    FractalisSeries *series = NULL;
    CHECK(fractalis_fgn(2048, 0.7, 1.0, 1, &series) == FRACTALIS_STATUS_OK);
    CHECK(fractalis_series_len(series) == 2048);

    FractalisHurst est;
    CHECK(fractalis_hurst(series, FRACTALIS_POLICY_HALVING, 0.99, &est) == FRACTALIS_STATUS_OK);
    CHECK(est.fractal_dimension == 2.0 - est.h);
    CHECK(est.ci_low <= est.h && est.h <= est.ci_high);

    FractalisSeries *bad = NULL;
    CHECK(fractalis_series_power(series, 4, &bad) == FRACTALIS_STATUS_EVEN_POWER);
    char *msg = fractalis_last_error_message();
    CHECK(msg != NULL);
    fractalis_string_free(msg);

    FractalisRolling *rolling = NULL;
    CHECK(fractalis_rolling(series, 150, 100, FRACTALIS_POLICY_HALVING, 0.99, &rolling) == FRACTALIS_STATUS_OK);
    CHECK(fractalis_rolling_len(rolling) == (2048 - 150) / 100 + 1);
    fractalis_rolling_free(rolling);

    printf("h=%.5f p=%.3g class=%d\n", est.h, est.p_value, (int)fractalis_classify(est.h, est.p_value, 0.001));
    fractalis_series_free(series);
    return 0;
}
