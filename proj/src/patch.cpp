#include "xsblab/patch.hpp"

#include <cmath>

#include "fft.hpp"
#include "xsblab/errors.hpp"

namespace xsb {

namespace {

int good_size(int n) {
  // smallest 2^a 3^b 5^c 7^d >= n
  for (int m = std::max(n, 1);; ++m) {
    int r = m;
    for (int p : {2, 3, 5, 7})
      while (r % p == 0) r /= p;
    if (r == 1) return m;
  }
}

void require_same_lattice(const Patch& a, const Patch& b) {
  if (a.dim != b.dim || a.xi_spacing != b.xi_spacing || a.tau_spacing != b.tau_spacing)
    throw GeometryError("patches live on different lattices");
}

Patch output_box(const Patch& a, const Patch& b) {
  MultiIndex lo{0, 0, 0};
  std::array<int, 3> ext{1, 1, 1};
  for (int d = 0; d < a.dim; ++d) {
    lo[d] = a.lo[d] + b.lo[d];
    ext[d] = a.extent[d] + b.extent[d] - 1;
  }
  return Patch::zeros(a.dim, a.xi_spacing, a.tau_spacing, lo, ext, a.tau_lo + b.tau_lo,
                      a.tau_extent + b.tau_extent - 1);
}

}  // namespace

Patch Patch::zeros(int dim, double dxi, double dtau, MultiIndex lo, std::array<int, 3> extent, int tau_lo,
                   int tau_extent) {
  if (dim < 1 || dim > 3) throw GeometryError("patch dimension must be 1, 2 or 3");
  Patch p;
  p.dim = dim;
  p.xi_spacing = dxi;
  p.tau_spacing = dtau;
  p.lo = lo;
  p.extent = extent;
  for (int d = dim; d < 3; ++d) {
    p.lo[d] = 0;
    p.extent[d] = 1;
  }
  p.tau_lo = tau_lo;
  p.tau_extent = tau_extent;
  p.data.assign(p.spatial_count() * static_cast<std::size_t>(tau_extent), cplx(0.0));
  return p;
}

std::size_t Patch::spatial_count() const {
  return static_cast<std::size_t>(extent[0]) * extent[1] * extent[2];
}

std::size_t Patch::offset(const MultiIndex& rel, int rel_tau) const {
  const std::size_t s = (static_cast<std::size_t>(rel[0]) * extent[1] + rel[1]) * extent[2] + rel[2];
  return s * tau_extent + rel_tau;
}

MultiIndex Patch::relative(std::size_t spatial) const {
  MultiIndex r{0, 0, 0};
  r[2] = static_cast<int>(spatial % extent[2]);
  spatial /= extent[2];
  r[1] = static_cast<int>(spatial % extent[1]);
  r[0] = static_cast<int>(spatial / extent[1]);
  return r;
}

MultiIndex Patch::absolute(std::size_t spatial) const {
  MultiIndex r = relative(spatial);
  for (int d = 0; d < dim; ++d) r[d] += lo[d];
  return r;
}

XiVector Patch::xi(std::size_t spatial) const {
  const MultiIndex m = absolute(spatial);
  XiVector v{0.0, 0.0, 0.0};
  for (int d = 0; d < dim; ++d) v[d] = m[d] * xi_spacing;
  return v;
}

double Patch::xi_norm_sq(std::size_t spatial) const {
  const XiVector v = xi(spatial);
  return v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
}

cplx Patch::value(const MultiIndex& idx, int tau_idx) const {
  MultiIndex rel{0, 0, 0};
  for (int d = 0; d < dim; ++d) {
    rel[d] = idx[d] - lo[d];
    if (rel[d] < 0 || rel[d] >= extent[d]) return 0.0;
  }
  const int rt = tau_idx - tau_lo;
  if (rt < 0 || rt >= tau_extent) return 0.0;
  return data[offset(rel, rt)];
}

double Patch::measure_weight() const { return std::pow(xi_spacing, dim) * tau_spacing; }

double Patch::l2_norm() const {
  double acc = 0.0;
  for (const cplx& z : data) acc += std::norm(z);
  return std::sqrt(acc * measure_weight());
}

Patch Patch::weighted(const std::function<double(const XiVector&, double, double)>& fn) const {
  Patch out = *this;
  for (std::size_t s = 0; s < spatial_count(); ++s) {
    const XiVector v = xi(s);
    const double x2 = xi_norm_sq(s);
    for (int j = 0; j < tau_extent; ++j) {
      cplx& z = out.at(s, j);
      if (z != 0.0) z *= fn(v, x2, tau(j));
    }
  }
  return out;
}

FrequencyField Patch::to_field(const LatticeGeometry& g) const {
  if (g.dim() != dim || g.xi_spacing() != xi_spacing || g.tau_spacing() != tau_spacing)
    throw GeometryError("patch spacings do not match " + g.fingerprint());
  std::vector<cplx> c(g.size());
  const int k = g.tau_count();
  for (std::size_t s = 0; s < spatial_count(); ++s) {
    const MultiIndex m = absolute(s);
    for (int j = 0; j < tau_extent; ++j) {
      const cplx z = at(s, j);
      if (z == 0.0) continue;
      bool ok = g.tau_in_band(tau_lo + j);
      for (int d = 0; d < dim; ++d) ok = ok && g.in_band(m[d]);
      if (!ok) throw GeometryError("patch site outside the band of " + g.fingerprint());
      c[g.spatial_offset(m) * k + g.tau_storage_of(tau_lo + j)] = z;
    }
  }
  return FrequencyField(g, std::move(c));
}

Patch convolve(const Patch& a, const Patch& b) {
  require_same_lattice(a, b);
  Patch out = output_box(a, b);
  std::vector<int> dims;
  for (int d = 0; d < a.dim; ++d) dims.push_back(good_size(out.extent[d]));
  dims.push_back(good_size(out.tau_extent));
  std::size_t total = 1;
  for (int n : dims) total *= n;

  auto load = [&](const Patch& p) {
    std::vector<cplx> buf(total);
    for (std::size_t s = 0; s < p.spatial_count(); ++s) {
      const MultiIndex r = p.relative(s);
      std::size_t base = 0;
      for (int d = 0; d < a.dim; ++d) base = base * dims[d] + r[d];
      base *= dims.back();
      for (int j = 0; j < p.tau_extent; ++j) buf[base + j] = p.at(s, j);
    }
    fft::transform(buf.data(), dims, fft::forward);
    return buf;
  };
  std::vector<cplx> fa = load(a);
  const std::vector<cplx> fb = load(b);
  for (std::size_t i = 0; i < total; ++i) fa[i] *= fb[i];
  fft::transform(fa.data(), dims, fft::backward);

  const double scale = a.measure_weight() / static_cast<double>(total);
  for (std::size_t s = 0; s < out.spatial_count(); ++s) {
    const MultiIndex r = out.relative(s);
    std::size_t base = 0;
    for (int d = 0; d < a.dim; ++d) base = base * dims[d] + r[d];
    base *= dims.back();
    for (int j = 0; j < out.tau_extent; ++j) out.at(s, j) = fa[base + j] * scale;
  }
  return out;
}

Patch convolve_bruteforce(const Patch& a, const Patch& b) {
  require_same_lattice(a, b);
  Patch out = output_box(a, b);
  const double w = a.measure_weight();
  for (std::size_t sa = 0; sa < a.spatial_count(); ++sa) {
    const MultiIndex ra = a.relative(sa);
    for (std::size_t sb = 0; sb < b.spatial_count(); ++sb) {
      const MultiIndex rb = b.relative(sb);
      const MultiIndex ro{ra[0] + rb[0], ra[1] + rb[1], ra[2] + rb[2]};
      for (int ja = 0; ja < a.tau_extent; ++ja) {
        const cplx x = a.at(sa, ja);
        if (x == 0.0) continue;
        for (int jb = 0; jb < b.tau_extent; ++jb) out.data[out.offset(ro, ja + jb)] += w * x * b.at(sb, jb);
      }
    }
  }
  return out;
}

Patch convolve_all(const std::vector<Patch>& parts) {
  if (parts.empty()) throw std::invalid_argument("convolve_all needs at least one patch");
  Patch acc = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) acc = convolve(acc, parts[i]);
  return acc;
}

}  // namespace xsb
