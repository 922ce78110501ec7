#include "iwasawa/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <queue>
#include <sstream>
#include <string>
#include <thread>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "iwasawa/errors.hpp"

namespace iwasawa {
namespace {

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 15>;
using Gauss = boost::math::quadrature::gauss<double, 7>;

struct Panel {
  double a;
  double b;
  double value;
  double error;

  bool operator<(const Panel& other) const { return error < other.error; }
};

Panel integrate_panel(const std::function<double(double)>& f, double a, double b) {
  const auto& x = Kronrod::abscissa();
  const auto& wk = Kronrod::weights();
  const auto& wg = Gauss::weights();
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  const double f0 = f(mid);
  double kronrod = f0 * wk[0];
  double gauss = f0 * wg[0];
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double sum = f(mid + half * x[i]) + f(mid - half * x[i]);
    kronrod += sum * wk[i];
    if (i % 2 == 0) gauss += sum * wg[i / 2];
  }
  kronrod *= half;
  gauss *= half;
  if (!std::isfinite(kronrod)) {
    std::ostringstream msg;
    msg << "radial_integral: non-finite integrand on [" << a << ", " << b << "]";
    throw NoConvergence(msg.str());
  }
  const double error = std::max(std::abs(kronrod - gauss),
                                4.0 * std::numeric_limits<double>::epsilon() * std::abs(kronrod));
  return Panel{a, b, kronrod, error};
}

// Breakpoints for radial integrands, which typically change scale
// geometrically near 0: [0, 1] then ratio-8 panels, or ratio-8 panels from lower.
std::vector<double> initial_breakpoints(double lower, double upper) {
  std::vector<double> pts{lower};
  double x = lower > 0.0 ? lower * 8.0 : 1.0;
  while (x < upper) {
    pts.push_back(x);
    x *= 8.0;
  }
  pts.push_back(upper);
  return pts;
}

RadialResult adaptive(const std::function<double(double)>& f, const std::vector<double>& pts,
                      const RadialRule& rule) {
  std::priority_queue<Panel> panels;
  double total = 0.0;
  double error = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (pts[i + 1] <= pts[i]) continue;
    Panel panel = integrate_panel(f, pts[i], pts[i + 1]);
    total += panel.value;
    error += panel.error;
    panels.push(panel);
  }
  int subdivisions = 0;
  while (!panels.empty() && error > std::max(rule.abs_tol, rule.rel_tol * std::abs(total))) {
    if (subdivisions >= rule.max_subdivisions) {
      std::ostringstream msg;
      msg << "radial_integral: subdivision budget " << rule.max_subdivisions
          << " exhausted with error estimate " << error << " on [" << pts.front() << ", "
          << pts.back() << "]";
      throw NoConvergence(msg.str());
    }
    const Panel worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      throw NoConvergence("radial_integral: panel width underflow");
    }
    const Panel left = integrate_panel(f, worst.a, mid);
    const Panel right = integrate_panel(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
    ++subdivisions;
  }
  // Re-sum to shed the drift of the running updates.
  total = 0.0;
  error = 0.0;
  while (!panels.empty()) {
    total += panels.top().value;
    error += panels.top().error;
    panels.pop();
  }
  return RadialResult{total, error};
}

void check_rule(const RadialRule& rule) {
  if (!(rule.abs_tol > 0.0) || !(rule.rel_tol > 0.0) || rule.max_subdivisions < 1) {
    throw PreconditionViolation("RadialRule: tolerances and subdivision budget must be positive");
  }
}

// Chan et al. pairwise combination of (count, mean, M2) accumulators.
struct Moments {
  std::size_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;
  double error_sum = 0.0;

  void add(double x, double err) {
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
    error_sum += err;
  }

  void merge(const Moments& other) {
    if (other.count == 0) return;
    if (count == 0) {
      *this = other;
      return;
    }
    const double n1 = static_cast<double>(count);
    const double n2 = static_cast<double>(other.count);
    const double delta = other.mean - mean;
    const double n = n1 + n2;
    mean += delta * n2 / n;
    m2 += other.m2 + delta * delta * n1 * n2 / n;
    count += other.count;
    error_sum += other.error_sum;
  }
};

constexpr std::size_t kBlockSize = 2048;

std::string describe(const SphereDirection& omega) {
  std::ostringstream out;
  out.precision(17);
  out << "[";
  const auto& m = omega.omega().matrix();
  for (int i = 0; i < m.rows(); ++i) {
    out << (i ? ", [" : "[");
    for (int j = 0; j < m.cols(); ++j) {
      out << (j ? ", " : "") << "[" << m(i, j).real() << ", " << m(i, j).imag() << "]";
    }
    out << "]";
  }
  out << "]";
  return out.str();
}

Estimate sphere_reduce(const std::function<RadialResult(const SphereDirection&)>& h, int p,
                       const QuadratureSpec& spec) {
  spec.validate();
  if (p < 1 || p > kMaxDim) throw PreconditionViolation("sphere_integral: p out of range");
  const std::size_t n = spec.sphere_samples;
  const std::size_t blocks = (n + kBlockSize - 1) / kBlockSize;
  std::vector<Moments> partial(blocks);
  std::vector<std::exception_ptr> failures(blocks);

  auto run_block = [&](std::size_t b) {
    try {
      const std::size_t end = std::min(n, (b + 1) * kBlockSize);
      for (std::size_t k = b * kBlockSize; k < end; ++k) {
        Stream rng(spec.seed, k);
        const SphereDirection omega = sphere_sample(p, rng);
        const RadialResult r = h(omega);
        if (!std::isfinite(r.value) || !std::isfinite(r.error)) {
          throw NonFiniteSample("sphere_integral: non-finite integrand at sample " +
                                std::to_string(k) + ", omega = " + describe(omega));
        }
        partial[b].add(r.value, r.error);
      }
    } catch (...) {
      failures[b] = std::current_exception();
    }
  };

  const int workers =
      static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(worker_count(spec)), blocks));
  if (workers <= 1) {
    for (std::size_t b = 0; b < blocks; ++b) run_block(b);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t b = static_cast<std::size_t>(w); b < blocks;
             b += static_cast<std::size_t>(workers)) {
          run_block(b);
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  Moments total;
  for (std::size_t b = 0; b < blocks; ++b) {
    if (failures[b]) std::rethrow_exception(failures[b]);
    total.merge(partial[b]);
  }

  const double mass = sphere_mass(p);
  const double nd = static_cast<double>(total.count);
  const double variance = total.count > 1 ? std::max(0.0, total.m2 / (nd - 1.0)) : 0.0;
  const double sampling = mass * std::sqrt(variance / nd);
  const double quadrature = mass * total.error_sum / nd;
  return Estimate{mass * total.mean, std::hypot(sampling, quadrature), total.count};
}

}  // namespace

void QuadratureSpec::validate() const {
  if (sphere_samples < 1) throw PreconditionViolation("QuadratureSpec: sphere_samples must be >= 1");
  if (!(delta_min > 0.0) || !(delta_min < r_max)) {
    throw PreconditionViolation("QuadratureSpec: need 0 < delta_min < r_max");
  }
  if (threads < 0) throw PreconditionViolation("QuadratureSpec: threads must be >= 0");
  check_rule(radial);
}

RadialResult radial_integral(const std::function<double(double)>& f, double lower, double upper,
                             const RadialRule& rule) {
  check_rule(rule);
  if (!(lower >= 0.0) || !(upper >= lower) || !std::isfinite(upper)) {
    throw PreconditionViolation("radial_integral: need 0 <= lower <= upper < inf");
  }
  if (upper == lower) return {};
  return adaptive(f, initial_breakpoints(lower, upper), rule);
}

RadialResult radial_integral_to_infinity(const std::function<double(double)>& f, double lower,
                                         double r_max, const RadialRule& rule) {
  RadialResult head;
  const double start = std::max(lower, r_max);
  if (lower < r_max) head = radial_integral(f, lower, r_max, rule);
  auto mapped = [&](double t) {
    const double u = 1.0 - t;
    const double y = f(start + t / u);
    return y == 0.0 ? 0.0 : y / (u * u);
  };
  const RadialResult tail = adaptive(mapped, {0.0, 1.0}, rule);
  return RadialResult{head.value + tail.value, head.error + tail.error};
}

FrullaniCheck frullani_check(double a, double b, const RadialRule& rule) {
  if (!(a > 0.0) || !(b > 0.0)) throw PreconditionViolation("frullani_check: need a, b > 0");
  // With lo <= hi: (e^{-ar} - e^{-br}) / r = sign * e^{-lo r} (-expm1(-(hi - lo) r)) / r,
  // which has limit b - a at r = 0 and never forms inf * 0.
  const double lo = std::min(a, b);
  const double hi = std::max(a, b);
  const double sign = a <= b ? 1.0 : -1.0;
  auto integrand = [lo, hi, sign](double r) {
    if (r == 0.0) return sign * (hi - lo);
    return -sign * std::exp(-lo * r) * std::expm1(-(hi - lo) * r) / r;
  };
  const double scale = lo;
  // Breakpoints in units of the slower decay rate.
  const RadialResult head = radial_integral(integrand, 0.0, 1.0 / scale, rule);
  const RadialResult rest = radial_integral_to_infinity(integrand, 1.0 / scale, 40.0 / scale, rule);
  return FrullaniCheck{head.value + rest.value, std::log(b / a)};
}

Estimate sphere_integral(const std::function<double(const SphereDirection&)>& h, int p,
                         const QuadratureSpec& spec) {
  return sphere_reduce([&h](const SphereDirection& omega) { return RadialResult{h(omega), 0.0}; },
                       p, spec);
}

Estimate sphere_integral_nested(const std::function<RadialResult(const SphereDirection&)>& h,
                                int p, const QuadratureSpec& spec) {
  return sphere_reduce(h, p, spec);
}

DivergenceFit divergence_slope(const std::function<double(double)>& F,
                               std::span<const double> delta_grid) {
  if (delta_grid.size() < 4) {
    throw PreconditionViolation("divergence_slope: grid needs at least 4 points");
  }
  for (std::size_t i = 0; i < delta_grid.size(); ++i) {
    if (!(delta_grid[i] > 0.0) || (i > 0 && !(delta_grid[i] < delta_grid[i - 1]))) {
      throw PreconditionViolation("divergence_slope: grid must be positive, strictly decreasing");
    }
  }
  DivergenceFit fit;
  std::vector<double> xs;
  std::vector<double> ys;
  for (double delta : delta_grid) {
    const double y = F(delta);
    fit.grid.emplace_back(delta, y);
    xs.push_back(std::log(1.0 / delta));
    ys.push_back(y);
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  // A constant F fits perfectly with zero slope.
  fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

std::vector<double> default_delta_grid() {
  std::vector<double> grid;
  for (int k = 4; k <= 20; ++k) grid.push_back(std::ldexp(1.0, -k));
  return grid;
}

int worker_count(const QuadratureSpec& spec) {
  if (spec.threads > 0) return spec.threads;
  if (const char* env = std::getenv("IWASAWA_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<int>(std::min<long>(v, 256));
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace iwasawa
