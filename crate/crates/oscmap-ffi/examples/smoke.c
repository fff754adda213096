/* Minimal C consumer of the oscmap C ABI: build a weakly coupled dimer,
 * propagate it spectrally and classically, and check the populations agree.
 *
 * Build (from the workspace root, after `cargo build -p oscmap-ffi`):
 *   cc crates/oscmap-ffi/examples/smoke.c \
 *      -Icrates/oscmap-ffi/include -Ltarget/debug -loscmap_ffi -lm -o smoke
 */

#include <math.h>
#include <stdio.h>
#include <stdlib.h>

#include "oscmap.h"

static void check(OscmapStatus status, const char *what) {
    if (status != OSCMAP_STATUS_OK) {
        fprintf(stderr, "%s failed: %s\n", what, oscmap_status_name(status));
        exit(1);
    }
}

int main(void) {
    OscmapHamiltonian *h = NULL;
    check(oscmap_hamiltonian_dimer(1.0, 0.005, &h), "dimer");

    size_t dim = oscmap_hamiltonian_dim(h);
    double eigs[2];
    check(oscmap_eigenvalues(h, eigs), "eigenvalues");
    if (fabs(eigs[0] - 0.995) > 1e-12 || fabs(eigs[1] - 1.005) > 1e-12) {
        fprintf(stderr, "unexpected eigenvalues %.17g %.17g\n", eigs[0], eigs[1]);
        return 1;
    }

    double re0[2] = {1.0, 0.0};
    double im0[2] = {0.0, 0.0};
    size_t samples = 51;

    OscmapTrajectory *spectral = NULL;
    OscmapTrajectory *classical = NULL;
    check(oscmap_evolve(h, OSCMAP_METHOD_QUANTUM_SPECTRAL, re0, im0, 0.0, 100.0,
                        samples, &spectral),
          "spectral evolve");
    check(oscmap_evolve(h, OSCMAP_METHOD_CLASSICAL_EXACT, re0, im0, 0.0, 100.0,
                        samples, &classical),
          "classical evolve");

    double *pa = malloc(sizeof(double) * samples * dim);
    double *pb = malloc(sizeof(double) * samples * dim);
    check(oscmap_trajectory_populations(spectral, pa), "populations a");
    check(oscmap_trajectory_populations(classical, pb), "populations b");

    double worst = 0.0;
    for (size_t i = 0; i < samples * dim; i++) {
        double d = fabs(pa[i] - pb[i]);
        if (d > worst) {
            worst = d;
        }
    }
    free(pa);
    free(pb);
    oscmap_trajectory_free(spectral);
    oscmap_trajectory_free(classical);
    oscmap_hamiltonian_free(h);

    if (worst > 1e-8) {
        fprintf(stderr, "populations disagree by %.3g\n", worst);
        return 1;
    }
    printf("oscmap %s: quantum and classical populations agree within %.3g\n",
           oscmap_version(), worst);
    return 0;
}
