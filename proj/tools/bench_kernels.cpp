// Compares the OpenMP-parallel kernels against their serial reference
// implementations: grid curvature/residual evaluation and the cone parameter
// sweep. Prints wall times and speedups; exits nonzero if the two paths
// disagree.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "willmore/cone.hpp"
#include "willmore/geometry.hpp"
#include "willmore/roots.hpp"

namespace {

double now() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

template <typename F>
double timed(const F& f, int reps) {
    double best = 1e300;
    for (int i = 0; i < reps; ++i) {
        const double t0 = now();
        f();
        best = std::min(best, now() - t0);
    }
    return best;
}

bool bits_equal(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() &&
           std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads: %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP not enabled; both paths run serially\n");
#endif
    bool ok = true;

    // Grid kernels on a large wavy torus patch.
    const std::size_t n = 1024;
    const auto grid = willmore::geom::make_grid(
        [](double u, double v) {
            const double r = 2.0 + std::cos(v) + 0.1 * std::sin(5.0 * u);
            return willmore::geom::Vec3{r * std::cos(u), r * std::sin(u),
                                        std::sin(v) + 0.1 * std::cos(3.0 * u)};
        },
        0.0, 6.0, n, 0.0, 6.0, n);

    willmore::geom::FundamentalForms fp, fs;
    const double t_forms_par = timed([&] { fp = willmore::geom::fundamental_forms(grid, true); }, 3);
    const double t_forms_ser = timed([&] { fs = willmore::geom::fundamental_forms(grid, false); }, 3);
    ok = ok && bits_equal(fp.E, fs.E) && bits_equal(fp.L, fs.L) && bits_equal(fp.N, fs.N);
    std::printf("fundamental_forms  %4zu x %4zu  serial %8.3f ms  parallel %8.3f ms  speedup %5.2fx\n",
                n, n, 1e3 * t_forms_ser, 1e3 * t_forms_par, t_forms_ser / t_forms_par);

    const auto H = willmore::geom::mean_curvature(fp);
    const auto K = willmore::geom::gauss_curvature(fp);
    std::vector<double> rp, rs;
    const double t_res_par =
        timed([&] { rp = willmore::geom::willmore_residual(grid, H, K, true); }, 3);
    const double t_res_ser =
        timed([&] { rs = willmore::geom::willmore_residual(grid, H, K, false); }, 3);
    ok = ok && bits_equal(rp, rs);
    std::printf("willmore_residual  %4zu x %4zu  serial %8.3f ms  parallel %8.3f ms  speedup %5.2fx\n",
                n, n, 1e3 * t_res_ser, 1e3 * t_res_par, t_res_ser / t_res_par);

    // Cone parameter sweep.
    const auto as = willmore::roots::log_grid(0.01, 50.0, 96);
    std::vector<willmore::cone::SweepRow> sp, ss;
    const double t_sweep_par = timed([&] { sp = willmore::cone::sweep(as, true); }, 2);
    const double t_sweep_ser = timed([&] { ss = willmore::cone::sweep(as, false); }, 2);
    bool sweep_same = sp.size() == ss.size();
    for (std::size_t i = 0; sweep_same && i < sp.size(); ++i)
        sweep_same = sp[i].a == ss[i].a && sp[i].c == ss[i].c &&
                     sp[i].energy == ss[i].energy && sp[i].T == ss[i].T;
    ok = ok && sweep_same;
    std::printf("cone sweep         %4zu values   serial %8.3f ms  parallel %8.3f ms  speedup %5.2fx\n",
                as.size(), 1e3 * t_sweep_ser, 1e3 * t_sweep_par, t_sweep_ser / t_sweep_par);

    std::printf("parallel/serial agreement: %s\n", ok ? "bitwise identical" : "MISMATCH");
    return ok ? 0 : 1;
}
