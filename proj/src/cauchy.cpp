#include "dbar/cauchy.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>
#include <tuple>

namespace dbar {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kDirectBelow = 32;

int next_pow2(int v) {
    int p = 1;
    while (p < v) p <<= 1;
    return p;
}

// FFTW's planner is not thread-safe; executing an existing plan is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwDeleter {
    void operator()(fftw_complex* p) const { fftw_free(p); }
};
using FftwBuffer = std::unique_ptr<fftw_complex[], FftwDeleter>;

FftwBuffer fftw_buffer(std::size_t n) {
    return FftwBuffer(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n)));
}

// Kernel spectrum and plans for one plane shape, built once and reused.
struct FftPlan {
    int pa = 0, pb = 0;
    fftw_plan fwd = nullptr, bwd = nullptr;
    std::vector<cplx> kernel_hat;  // already scaled by ha*hb/(pa*pb)
};

std::shared_ptr<const FftPlan> fft_plan(int ra, int rb, double ha, double hb) {
    using Key = std::tuple<int, int, double, double>;
    static std::map<Key, std::shared_ptr<const FftPlan>> cache;
    std::lock_guard<std::mutex> lock(planner_mutex());
    const Key key{ra, rb, ha, hb};
    if (auto it = cache.find(key); it != cache.end()) return it->second;

    auto plan = std::make_shared<FftPlan>();
    plan->pa = next_pow2(2 * ra - 1);
    plan->pb = next_pow2(2 * rb - 1);
    const std::size_t P = static_cast<std::size_t>(plan->pa) * plan->pb;
    FftwBuffer buf = fftw_buffer(P);
    plan->fwd = fftw_plan_dft_2d(plan->pa, plan->pb, buf.get(), buf.get(), FFTW_FORWARD, FFTW_ESTIMATE);
    plan->bwd = fftw_plan_dft_2d(plan->pa, plan->pb, buf.get(), buf.get(), FFTW_BACKWARD, FFTW_ESTIMATE);

    const CauchyKernelTable K = CauchyKernelTable::build(ra, rb, ha, hb);
    auto* b = reinterpret_cast<cplx*>(buf.get());
    std::fill(b, b + P, cplx(0.0, 0.0));
    for (int m1 = -(ra - 1); m1 <= ra - 1; ++m1)
        for (int m2 = -(rb - 1); m2 <= rb - 1; ++m2) {
            const int i = (m1 + plan->pa) % plan->pa, j = (m2 + plan->pb) % plan->pb;
            b[static_cast<std::size_t>(i) * plan->pb + j] = K.at(m1, m2);
        }
    fftw_execute_dft(plan->fwd, buf.get(), buf.get());
    const double scale = ha * hb / static_cast<double>(P);
    plan->kernel_hat.assign(b, b + P);
    for (auto& v : plan->kernel_hat) v *= scale;
    cache.emplace(key, plan);
    return plan;
}

void convolve_direct_plane(const CauchyKernelTable& K, const cplx* src, cplx* dst, std::size_t sa,
                           std::size_t sb) {
    const double dA = K.ha * K.hb;
    for (int i = 0; i < K.ra; ++i)
        for (int j = 0; j < K.rb; ++j) {
            cplx acc(0.0, 0.0);
            for (int p = 0; p < K.ra; ++p)
                for (int q = 0; q < K.rb; ++q) {
                    const cplx v = src[p * sa + q * sb];
                    if (v != cplx(0.0, 0.0)) acc += K.at(i - p, j - q) * v;
                }
            dst[i * sa + j * sb] = acc * dA;
        }
}

}  // namespace

double SliceField::sup() const {
    double m = 0.0;
    for (const auto& v : values) m = std::max(m, std::abs(v));
    return m;
}

bool has_center(const cplx& c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); }

CauchyKernelTable CauchyKernelTable::build(int ra, int rb, double ha, double hb, int sub) {
    CauchyKernelTable K;
    K.ra = ra;
    K.rb = rb;
    K.ha = ha;
    K.hb = hb;
    K.samples.assign(static_cast<std::size_t>(2 * ra - 1) * (2 * rb - 1), cplx(0.0, 0.0));
    auto slot = [&](int m1, int m2) -> cplx& {
        return K.samples[(m1 + ra - 1) * (2 * rb - 1) + (m2 + rb - 1)];
    };
    for (int m1 = 0; m1 <= ra - 1; ++m1)
        for (int m2 = -(rb - 1); m2 <= rb - 1; ++m2) {
            if (m1 == 0 && m2 <= 0) continue;  // filled by antisymmetry
            cplx v;
            if (std::abs(m1) <= 1 && std::abs(m2) <= 1) {
                cplx acc(0.0, 0.0);
                for (int s = 0; s < sub; ++s)
                    for (int t = 0; t < sub; ++t) {
                        const double x = (m1 - 0.5 + (s + 0.5) / sub) * ha;
                        const double y = (m2 - 0.5 + (t + 0.5) / sub) * hb;
                        acc += 1.0 / cplx(x, y);
                    }
                v = acc / (kPi * sub * sub);
            } else {
                v = 1.0 / (kPi * cplx(m1 * ha, m2 * hb));
            }
            slot(m1, m2) = v;
            slot(-m1, -m2) = -v;
        }
    slot(0, 0) = 0.0;
    return K;
}

ScalarField cauchy_transform(const ScalarField& phi, int k) {
    const PlaneLayout L(phi.grid, k);
    ScalarField out(phi.grid);
    if (L.ra < kDirectBelow || L.rb < kDirectBelow) {
        const CauchyKernelTable K = CauchyKernelTable::build(L.ra, L.rb, L.ha, L.hb);
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t p = 0; p < static_cast<std::ptrdiff_t>(L.count); ++p) {
            const std::size_t b = L.base(p);
            convolve_direct_plane(K, phi.values.data() + b, out.values.data() + b, L.sa, L.sb);
        }
        return out;
    }

    const auto plan = fft_plan(L.ra, L.rb, L.ha, L.hb);
    const std::size_t P = static_cast<std::size_t>(plan->pa) * plan->pb;
#pragma omp parallel
    {
        FftwBuffer buf = fftw_buffer(P);
        auto* b = reinterpret_cast<cplx*>(buf.get());
#pragma omp for schedule(static)
        for (std::ptrdiff_t p = 0; p < static_cast<std::ptrdiff_t>(L.count); ++p) {
            const std::size_t base = L.base(p);
            const cplx* src = phi.values.data() + base;
            bool any = false;
            std::fill(b, b + P, cplx(0.0, 0.0));
            for (int i = 0; i < L.ra; ++i)
                for (int j = 0; j < L.rb; ++j) {
                    const cplx v = src[i * L.sa + j * L.sb];
                    b[static_cast<std::size_t>(i) * plan->pb + j] = v;
                    any = any || v != cplx(0.0, 0.0);
                }
            if (!any) continue;  // output already zero
            fftw_execute_dft(plan->fwd, buf.get(), buf.get());
            for (std::size_t t = 0; t < P; ++t) b[t] *= plan->kernel_hat[t];
            fftw_execute_dft(plan->bwd, buf.get(), buf.get());
            cplx* dst = out.values.data() + base;
            for (int i = 0; i < L.ra; ++i)
                for (int j = 0; j < L.rb; ++j) dst[i * L.sa + j * L.sb] = b[static_cast<std::size_t>(i) * plan->pb + j];
        }
    }
    return out;
}

namespace reference {

ScalarField cauchy_transform(const ScalarField& phi, int k) {
    const PlaneLayout L(phi.grid, k);
    const CauchyKernelTable K = CauchyKernelTable::build(L.ra, L.rb, L.ha, L.hb);
    ScalarField out(phi.grid);
    for (std::size_t p = 0; p < L.count; ++p) {
        const std::size_t b = L.base(p);
        convolve_direct_plane(K, phi.values.data() + b, out.values.data() + b, L.sa, L.sb);
    }
    return out;
}

}  // namespace reference

namespace {

// Reduce each plane against a weight table w(i, j).
SliceField reduce_planes(const ScalarField& phi, const PlaneLayout& L, const std::vector<cplx>& w) {
    SliceField out;
    out.k = L.k;
    out.values.assign(L.count, cplx(0.0, 0.0));
    const double scale = L.ha * L.hb / kPi;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t p = 0; p < static_cast<std::ptrdiff_t>(L.count); ++p) {
        const cplx* src = phi.values.data() + L.base(p);
        cplx acc(0.0, 0.0);
        for (int i = 0; i < L.ra; ++i)
            for (int j = 0; j < L.rb; ++j) acc += src[i * L.sa + j * L.sb] * w[i * L.rb + j];
        out.values[p] = acc * scale;
    }
    return out;
}

}  // namespace

SliceField moment(const ScalarField& phi, int k, int l) {
    if (l < 0) throw DomainError("moment order must be >= 0");
    const PlaneLayout L(phi.grid, k);
    std::vector<cplx> w(static_cast<std::size_t>(L.ra) * L.rb);
    for (int i = 0; i < L.ra; ++i)
        for (int j = 0; j < L.rb; ++j) w[i * L.rb + j] = ipow(L.point(i, j), l);
    return reduce_planes(phi, L, w);
}

SliceField punctured_moment(const ScalarField& phi, int k, const CenterField& c, int l, double support_tol) {
    if (l < 0) throw DomainError("moment order must be >= 0");
    const PlaneLayout L(phi.grid, k);
    if (c.size() != L.count) throw DomainError("center field has the wrong number of planes");
    const double thr = support_tol * phi.sup();
    const double min_dist = 3.0 * std::max(L.ha, L.hb);
    SliceField out;
    out.k = k;
    out.values.assign(L.count, cplx(0.0, 0.0));
    const double scale = L.ha * L.hb / kPi;
    bool too_close = false;
#pragma omp parallel for schedule(static) reduction(|| : too_close)
    for (std::ptrdiff_t p = 0; p < static_cast<std::ptrdiff_t>(L.count); ++p) {
        if (!has_center(c[p])) continue;
        const cplx* src = phi.values.data() + L.base(p);
        cplx acc(0.0, 0.0);
        for (int i = 0; i < L.ra; ++i)
            for (int j = 0; j < L.rb; ++j) {
                const cplx v = src[i * L.sa + j * L.sb];
                const cplx d = L.point(i, j) - c[p];
                if (std::abs(d) < min_dist) {
                    if (std::abs(v) > thr) too_close = true;
                    continue;
                }
                acc += v / ipow(d, l + 1);
            }
        out.values[p] = acc * scale;
    }
    if (too_close) throw PunctureTooCloseError("punctured_moment: support within 3h of a puncture");
    return out;
}

MomentTable::Worst MomentTable::worst() const {
    Worst w;
    auto consider = [&](int j, int l, const SliceField& f) {
        const double v = norm > 0 ? f.sup() / norm : f.sup();
        if (v > w.value) w = {j, l, v};
    };
    for (int l = 0; l < static_cast<int>(outer.size()); ++l) consider(0, l, outer[l]);
    for (const auto& [key, f] : punctured) consider(key.first, key.second, f);
    return w;
}

MomentTable moment_table(const ScalarField& phi, int k, const std::vector<CenterField>& punctures, int l_max,
                         double r) {
    MomentTable t;
    t.k = k;
    t.l_max = l_max;
    t.norm = lr_norm(phi, r);
    for (int l = 0; l <= l_max; ++l) t.outer.push_back(moment(phi, k, l));
    for (std::size_t j = 0; j < punctures.size(); ++j)
        for (int l = 0; l <= l_max; ++l)
            t.punctured.emplace(std::make_pair(static_cast<int>(j) + 1, l), punctured_moment(phi, k, punctures[j], l));
    return t;
}

}  // namespace dbar
