#include <math.h>
#include <stdio.h>
#include <string.h>

#include "twoband.h"

int main(void) {
    const double lower[3] = {1.0, 1.0, 1.0};
    const double upper[2] = {1.0, 1.0};
    TbBandMatrix *m = NULL;
    if (tb_band_matrix_new(4, 1, 2, TB_MODE_POSITIVE, lower, NULL, 3, upper, NULL, 2, &m) != TB_STATUS_OK) {
        fprintf(stderr, "new: %s\n", tb_last_error_message());
        return 1;
    }
    TbSpectrum *s = NULL;
    if (tb_analyze(m, &s) != TB_STATUS_OK) {
        fprintf(stderr, "analyze: %s\n", tb_last_error_message());
        return 1;
    }
    size_t p = 0, g = 0, zeros = 0, len = 0;
    double radius = 0.0;
    tb_spectrum_counts(s, &p, &g, &zeros);
    tb_spectrum_radii(s, 0, &radius, 1, &len);
    int passed = 0;
    tb_verify(m, 1e-8, 1e-5, &passed, NULL);
    printf("p=%zu g=%zu zeros=%zu radius=%.15f passed=%d\n", p, g, zeros, radius, passed);
    int ok = p == 3 && g == 1 && zeros == 1 && len == 1 && fabs(radius - cbrt(2.0)) < 1e-14 && passed == 1;

    TbBandMatrix *bad = NULL;
    if (tb_band_matrix_from_json("{", &bad) != TB_STATUS_INVALID_INPUT || bad != NULL) {
        ok = 0;
    }
    tb_spectrum_free(s);
    tb_band_matrix_free(m);
    return ok ? 0 : 1;
}
