#include "dbar/io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace dbar::io {

namespace {

static_assert(std::endian::native == std::endian::little, "CFLD1 I/O assumes a little-endian host");

constexpr char kMagic[4] = {'C', 'F', 'L', 'D'};
constexpr std::uint32_t kVersion = 1;
constexpr std::uint32_t kMaxAxisRes = 1u << 20;

void put_u32(std::ostream& os, std::uint32_t v) { os.write(reinterpret_cast<const char*>(&v), 4); }
void put_f64(std::ostream& os, double v) { os.write(reinterpret_cast<const char*>(&v), 8); }

std::uint32_t get_u32(std::istream& is) {
    std::uint32_t v = 0;
    if (!is.read(reinterpret_cast<char*>(&v), 4)) throw FormatError("CFLD1: truncated header");
    return v;
}

double get_f64(std::istream& is) {
    double v = 0;
    if (!is.read(reinterpret_cast<char*>(&v), 8)) throw FormatError("CFLD1: truncated header");
    return v;
}

}  // namespace

void write_cfld(std::ostream& os, const QForm& w) {
    const GridSpec& g = w.grid;
    os.write(kMagic, 4);
    put_u32(os, kVersion);
    put_u32(os, g.n);
    put_u32(os, w.q);
    put_u32(os, g.axes());
    for (int a = 0; a < g.axes(); ++a) put_u32(os, g.res[a]);
    for (int a = 0; a < g.axes(); ++a) {
        put_f64(os, g.lo[a]);
        put_f64(os, g.hi[a]);
    }
    put_u32(os, static_cast<std::uint32_t>(w.coeffs.size()));
    for (const auto& [J, f] : w.coeffs) {
        put_u32(os, static_cast<std::uint32_t>(J.size()));
        for (int j : J) put_u32(os, j);
        os.write(reinterpret_cast<const char*>(f.values.data()),
                 static_cast<std::streamsize>(f.values.size() * sizeof(cplx)));
    }
    if (!os) throw FormatError("CFLD1: write failed");
}

QForm read_cfld(std::istream& is) {
    char magic[4];
    if (!is.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) throw FormatError("CFLD1: bad magic");
    if (get_u32(is) != kVersion) throw FormatError("CFLD1: unsupported version");
    const std::uint32_t n = get_u32(is);
    const std::uint32_t q = get_u32(is);
    const std::uint32_t axes = get_u32(is);
    if (n < 1 || n > 8 || axes != 2 * n || q > n) throw FormatError("CFLD1: inconsistent n/q/axes");
    GridSpec g;
    g.n = static_cast<int>(n);
    for (std::uint32_t a = 0; a < axes; ++a) {
        const std::uint32_t r = get_u32(is);
        if (r > kMaxAxisRes) throw FormatError("CFLD1: axis resolution out of range");
        g.res.push_back(static_cast<int>(r));
    }
    for (std::uint32_t a = 0; a < axes; ++a) {
        g.lo.push_back(get_f64(is));
        g.hi.push_back(get_f64(is));
    }
    try {
        g.validate();
    } catch (const GridError& e) {
        throw FormatError(std::string("CFLD1: ") + e.what());
    }
    QForm w(g, static_cast<int>(q));
    const std::uint32_t count = get_u32(is);
    for (std::uint32_t c = 0; c < count; ++c) {
        const std::uint32_t len = get_u32(is);
        if (len > n) throw FormatError("CFLD1: multi-index longer than n");
        Index J;
        for (std::uint32_t t = 0; t < len; ++t) J.push_back(static_cast<int>(get_u32(is)));
        if (!is_increasing(J, g.n) || static_cast<int>(J.size()) != g.n - w.q)
            throw FormatError("CFLD1: bad multi-index");
        ScalarField f(g);
        if (!is.read(reinterpret_cast<char*>(f.values.data()),
                     static_cast<std::streamsize>(f.values.size() * sizeof(cplx))))
            throw FormatError("CFLD1: truncated samples");
        w.coeffs[J] = std::move(f);
    }
    return w;
}

void write_cfld_file(const std::string& path, const QForm& w) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw FormatError("cannot open " + path + " for writing");
    write_cfld(os, w);
}

QForm read_cfld_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw FormatError("cannot open " + path);
    return read_cfld(is);
}

Slice parse_slice(const std::string& text, const GridSpec& g) {
    Slice s;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw UsageError("slice: expected axis=value, got '" + item + "'");
        int axis = 0;
        double value = 0;
        try {
            std::size_t used = 0;
            axis = std::stoi(item.substr(0, eq), &used);
            if (used != eq) throw std::invalid_argument("axis");
            value = std::stod(item.substr(eq + 1));
        } catch (const std::exception&) {
            throw UsageError("slice: cannot parse '" + item + "'");
        }
        if (axis < 0 || axis >= g.axes()) throw UsageError("slice: axis " + std::to_string(axis) + " out of range");
        if (value < g.lo[axis] - 1e-12 || value > g.hi[axis] + 1e-12)
            throw UsageError("slice: value outside the grid extent on axis " + std::to_string(axis));
        s[axis] = value;
    }
    return s;
}

void write_csv(std::ostream& os, const QForm& w, const Slice& slice) {
    const GridSpec& g = w.grid;
    std::vector<int> fixed(g.axes(), -1);
    for (const auto& [a, v] : slice) {
        if (a < 0 || a >= g.axes()) throw UsageError("slice: axis out of range");
        fixed[a] = static_cast<int>(std::lround((v - g.lo[a]) / g.h(a)));
        fixed[a] = std::clamp(fixed[a], 0, g.res[a] - 1);
    }
    os << std::setprecision(17);
    bool first = true;
    for (int a = 0; a < g.axes(); ++a)
        if (fixed[a] < 0) {
            os << (first ? "" : ",") << 'x' << a;
            first = false;
        }
    // Every coefficient is listed, absent ones as zero columns.
    const ScalarField zero(g);
    std::vector<const ScalarField*> cols;
    const int len = g.n - w.q;
    std::vector<bool> pick(g.n, false);
    std::fill(pick.begin(), pick.begin() + len, true);
    std::vector<Index> keys;
    do {
        Index J;
        for (int v = 0; v < g.n; ++v)
            if (pick[v]) J.push_back(v + 1);
        keys.push_back(J);
    } while (std::prev_permutation(pick.begin(), pick.end()));
    std::sort(keys.begin(), keys.end());
    for (const Index& J : keys) {
        std::string tag = "c";
        for (int j : J) tag += std::to_string(j);
        os << (first ? "" : ",") << tag << "_re," << tag << "_im";
        first = false;
        const auto it = w.coeffs.find(J);
        cols.push_back(it == w.coeffs.end() ? &zero : &it->second);
    }
    os << '\n';
    std::vector<int> idx(g.axes(), 0);
    for (std::size_t flat = 0; flat < g.size(); ++flat) {
        std::size_t rem = flat;
        bool keep = true;
        for (int a = g.axes(); a-- > 0;) {
            idx[a] = static_cast<int>(rem % g.res[a]);
            rem /= g.res[a];
            if (fixed[a] >= 0 && idx[a] != fixed[a]) keep = false;
        }
        if (!keep) continue;
        first = true;
        for (int a = 0; a < g.axes(); ++a)
            if (fixed[a] < 0) {
                os << (first ? "" : ",") << g.coord(a, idx[a]);
                first = false;
            }
        for (const ScalarField* f : cols) {
            os << (first ? "" : ",") << (*f)[flat].real() << ',' << (*f)[flat].imag();
            first = false;
        }
        os << '\n';
    }
}

}  // namespace dbar::io
