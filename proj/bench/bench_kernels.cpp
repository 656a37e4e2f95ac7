// Compares the OpenMP spectral-radius kernel against the serial reference on
// progressively larger covers of a wedge of circles.
#include <chrono>
#include <cmath>
#include <cstdio>

#include "entx/entropy.hpp"
#include "entx/metric_graph.hpp"

using namespace entx;

namespace {

double time_ms(const NonBacktracking& nb, double h, bool parallel, int reps, double* out)
{
    auto start = std::chrono::steady_clock::now();
    double v = 0.0;
    for (int i = 0; i < reps; ++i)
        v = parallel ? nb.spectral_radius(h) : nb.spectral_radius_serial(h);
    auto stop = std::chrono::steady_clock::now();
    *out = v;
    return std::chrono::duration<double, std::milli>(stop - start).count() / reps;
}

} // namespace

int main()
{
    std::printf("%8s %8s %12s %12s %10s %12s\n", "arcs", "sheets", "serial-ms", "openmp-ms",
                "speedup", "max-diff");
    for (int sheets : {8, 64, 256, 1024}) {
        MetricGraph base = make_wedge_of_circles(4);
        MetricGraph g = cyclic_cover(base, base.edges[0].name, sheets);
        NonBacktracking nb = NonBacktracking::build(g);
        int reps = sheets <= 64 ? 20 : 5;
        double diff = 0.0;
        double serial_ms = 0.0, parallel_ms = 0.0;
        for (double h : {0.5, 1.0, 1.5}) {
            double vs = 0.0, vp = 0.0;
            serial_ms += time_ms(nb, h, false, reps, &vs);
            parallel_ms += time_ms(nb, h, true, reps, &vp);
            diff = std::max(diff, std::abs(vs - vp));
        }
        std::printf("%8zu %8d %12.3f %12.3f %10.2f %12.3e\n", nb.arcs.size(), sheets, serial_ms,
                    parallel_ms, serial_ms / parallel_ms, diff);
        if (diff > 1e-9) {
            std::printf("kernel mismatch beyond tolerance\n");
            return 1;
        }
    }
    return 0;
}
