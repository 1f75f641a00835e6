#include "wwgm/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <utility>

namespace wwgm::spectral {

namespace {

class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  // block: -1 for all axes, otherwise the AxisBlock transformed alone.
  fftw_plan get(const PhaseGrid& grid, int sign, int block = -1) {
    const auto key = std::make_tuple(grid.axes(), grid.points(), sign, block);
    std::lock_guard lock(mutex_);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    auto* in = fftw_alloc_complex(grid.size());
    auto* out = fftw_alloc_complex(grid.size());
    fftw_plan plan = nullptr;
    if (block < 0) {
      std::vector<int> dims(grid.axes(), grid.points());
      plan = fftw_plan_dft(grid.axes(), dims.data(), in, out, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    } else {
      const int n = grid.dim();
      const int first = block == static_cast<int>(AxisBlock::p) ? 0 : n;
      const int other = n - first;
      std::vector<fftw_iodim> dims(n), loops(n);
      for (int i = 0; i < n; ++i) {
        const int s1 = static_cast<int>(grid.stride(first + i));
        const int s2 = static_cast<int>(grid.stride(other + i));
        dims[i] = {grid.points(), s1, s1};
        loops[i] = {grid.points(), s2, s2};
      }
      plan = fftw_plan_guru_dft(n, dims.data(), n, loops.data(), in, out, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    }
    fftw_free(in);
    fftw_free(out);
    plans_.emplace(key, plan);
    return plan;
  }

  PlanCache(const PlanCache&) = delete;
  PlanCache& operator=(const PlanCache&) = delete;

 private:
  PlanCache() = default;
  ~PlanCache() {
    for (auto& [k, p] : plans_) fftw_destroy_plan(p);
  }

  std::mutex mutex_;
  std::map<std::tuple<int, int, int, int>, fftw_plan> plans_;
};

void execute_into(const PhaseGrid& grid, std::span<const Complex> in, Field& out, int sign) {
  out.resize(grid.size());
  fftw_plan plan = PlanCache::instance().get(grid, sign);
  // Out-of-place complex transforms leave the input untouched.
  fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(const_cast<Complex*>(in.data())),
                   reinterpret_cast<fftw_complex*>(out.data()));
}

Field execute(const PhaseGrid& grid, std::span<const Complex> in, int sign) {
  Field out;
  execute_into(grid, in, out, sign);
  return out;
}

// Per-axis table of k^power with the odd-power Nyquist convention.
std::vector<double> wave_powers(const PhaseGrid& grid, int power) {
  const int N = grid.points();
  std::vector<double> t(N);
  for (int j = 0; j < N; ++j) {
    if (power % 2 == 1 && j == N / 2) {
      t[j] = 0.0;
    } else {
      t[j] = std::pow(wavenumber(grid, j), power);
    }
  }
  return t;
}

}  // namespace

Field forward(const PhaseGrid& grid, std::span<const Complex> values) {
  return execute(grid, values, FFTW_FORWARD);
}

Field backward(const PhaseGrid& grid, std::span<const Complex> coeffs) {
  Field out = execute(grid, coeffs, FFTW_BACKWARD);
  const double scale = 1.0 / static_cast<double>(grid.size());
  for (auto& v : out) v *= scale;
  return out;
}

void block_forward_into(const PhaseGrid& grid, AxisBlock block, std::span<const Complex> values, Field& out) {
  out.resize(grid.size());
  fftw_plan plan = PlanCache::instance().get(grid, FFTW_FORWARD, static_cast<int>(block));
  fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(const_cast<Complex*>(values.data())),
                   reinterpret_cast<fftw_complex*>(out.data()));
}

void block_backward_into(const PhaseGrid& grid, AxisBlock block, std::span<const Complex> coeffs, Field& out) {
  out.resize(grid.size());
  fftw_plan plan = PlanCache::instance().get(grid, FFTW_BACKWARD, static_cast<int>(block));
  fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(const_cast<Complex*>(coeffs.data())),
                   reinterpret_cast<fftw_complex*>(out.data()));
  const double scale = 1.0 / std::pow(static_cast<double>(grid.points()), grid.dim());
  for (auto& v : out) v *= scale;
}

MixedMultiplier::MixedMultiplier(const PhaseGrid& grid, AxisBlock transformed, const Symbol& symbol)
    : grid_(grid), block_(transformed), table_(grid.size()) {
  const int n = grid.dim();
  const int N = grid.points();
  const int wave_first = transformed == AxisBlock::p ? 0 : n;
  const int coord_first = n - wave_first;
  double coords[3], waves[3];
  for (std::size_t f = 0; f < table_.size(); ++f) {
    int nyquist_axes[3];
    int count = 0;
    for (int i = 0; i < n; ++i) {
      coords[i] = grid.coordinate(f, coord_first + i);
      const int j = grid.index(f, wave_first + i);
      waves[i] = wavenumber(grid, j);
      if (j == N / 2) nyquist_axes[count++] = i;
    }
    Complex sum = 0.0;
    for (int flips = 0; flips < (1 << count); ++flips) {
      double w[3] = {waves[0], waves[1], waves[2]};
      for (int b = 0; b < count; ++b) {
        if (flips & (1 << b)) w[nyquist_axes[b]] = -w[nyquist_axes[b]];
      }
      sum += symbol(std::span<const double>(coords, n), std::span<const double>(w, n));
    }
    table_[f] = sum / static_cast<double>(1 << count);
  }
}

void MixedMultiplier::apply_add(std::span<const Complex> f, Field& out) const {
  block_forward_into(grid_, block_, f, work_);
  for (std::size_t i = 0; i < work_.size(); ++i) work_[i] *= table_[i];
  block_backward_into(grid_, block_, work_, back_);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += back_[i];
}

void forward_into(const PhaseGrid& grid, std::span<const Complex> values, Field& out) {
  execute_into(grid, values, out, FFTW_FORWARD);
}

void backward_into(const PhaseGrid& grid, std::span<const Complex> coeffs, Field& out) {
  execute_into(grid, coeffs, out, FFTW_BACKWARD);
  const double scale = 1.0 / static_cast<double>(grid.size());
  for (auto& v : out) v *= scale;
}

Spectrum::Spectrum(const PhaseGrid& grid, std::span<const Complex> values)
    : grid_(grid), coeffs_(forward(grid, values)) {}

Field wave_table(const PhaseGrid& grid, const Polynomial& multiplier) {
  const int axes = grid.axes();
  Field table(grid.size(), Complex{});
  for (const auto& [e, c] : multiplier.terms()) {
    std::vector<std::vector<double>> powers;
    powers.reserve(axes);
    for (int a = 0; a < axes; ++a) powers.push_back(wave_powers(grid, e[a]));
    for (std::size_t f = 0; f < table.size(); ++f) {
      double m = 1.0;
      for (int a = 0; a < axes; ++a) m *= powers[a][grid.index(f, a)];
      table[f] += c * m;
    }
  }
  return table;
}

Field Spectrum::wave_monomial(const Exponents& powers, Complex scale) const {
  Polynomial m = Polynomial::monomial(grid_.dim(), powers, scale);
  return wave_polynomial(m);
}

Field Spectrum::wave_polynomial(const Polynomial& multiplier) const {
  Field work = wave_table(grid_, multiplier);
  for (std::size_t f = 0; f < work.size(); ++f) work[f] *= coeffs_[f];
  return backward(grid_, work);
}

Field Spectrum::derivative(const Exponents& orders) const {
  int total = 0;
  for (int v : orders) total += v;
  // ∂^m <-> (i k)^m
  Complex scale = 1.0;
  for (int j = 0; j < total; ++j) scale *= kI;
  return wave_monomial(orders, scale);
}

Field derivative(const PhaseGrid& grid, std::span<const Complex> values, const Exponents& orders) {
  return Spectrum(grid, values).derivative(orders);
}

Field shift(const PhaseGrid& grid, std::span<const Complex> values, std::span<const double> s) {
  Field c = forward(grid, values);
  const int axes = grid.axes();
  const int N = grid.points();
  std::vector<std::vector<Complex>> ramps(axes, std::vector<Complex>(N));
  for (int a = 0; a < axes; ++a) {
    for (int j = 0; j < N; ++j) {
      // A Nyquist mode cannot carry a fractional shift; keep its real part only.
      if (j == N / 2) {
        ramps[a][j] = std::cos(wavenumber(grid, j) * s[a]);
      } else {
        ramps[a][j] = std::exp(-kI * (wavenumber(grid, j) * s[a]));
      }
    }
  }
  for (std::size_t f = 0; f < c.size(); ++f) {
    Complex r = 1.0;
    for (int a = 0; a < axes; ++a) r *= ramps[a][grid.index(f, a)];
    c[f] *= r;
  }
  return backward(grid, c);
}

double filtered_band(const PhaseGrid& grid, double fraction) { return fraction * grid.nyquist(); }

BandFilter::BandFilter(const PhaseGrid& grid, double fraction) : grid_(grid), keep_(grid.size(), 1) {
  const double cut = filtered_band(grid, fraction) * (1.0 + 1e-12);
  const int axes = grid.axes();
  for (std::size_t f = 0; f < keep_.size(); ++f) {
    for (int a = 0; a < axes; ++a) {
      if (std::abs(wavenumber(grid, grid.index(f, a))) > cut) {
        keep_[f] = 0;
        break;
      }
    }
  }
}

void BandFilter::apply(Field& values) {
  forward_into(grid_, values, scratch_);
  for (std::size_t f = 0; f < scratch_.size(); ++f) {
    if (!keep_[f]) scratch_[f] = 0.0;
  }
  backward_into(grid_, scratch_, values);
}

void band_filter(const PhaseGrid& grid, Field& values, double fraction) {
  BandFilter(grid, fraction).apply(values);
}

}  // namespace wwgm::spectral
