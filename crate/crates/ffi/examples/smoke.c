#include <stdio.h>
#include "dqsense.h"

int main(void) {
    DqState *s = NULL;
    double n = 0.0;
    if (dq_state_vacuum(2, &s) != DQ_STATUS_OK) return 1;
    dq_state_displace(s, 0, 10.0, 0.0);
    dq_state_two_mode_squeeze(s, 0, 1, 5.0);
    dq_state_total_photons(s, &n);
    printf("total_photons=%.6f\n", n);
    if (dq_state_loss(s, 0, 1.5) != DQ_STATUS_INVALID_ARGUMENT) return 2;
    printf("last_error=%s\n", dq_last_error());
    dq_state_free(s);

    DqParams p = {5.0, 100.0, 1.0, 1.0, 2, 100.0};
    double lod = 0.0;
    dq_lod(DQ_SCHEME_TSU_DISTRIBUTED, &p, &lod);
    printf("lod=%.9e\n", lod);
    return 0;
}
