// SPDX-License-Identifier: Apache-2.0
#include "finsler/jet.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <unordered_map>
#include <utility>

#include "finsler/error.hpp"

namespace finsler {

namespace detail {

struct JetTables {
  int nvars = 0;
  int order = 0;
  std::size_t size = 0;
  // exponents, row-major: exps[i * nvars + v]
  std::vector<std::uint8_t> exps;
  // degree_start[d] = first position of total degree d; degree_start[order+1] = size
  std::vector<std::size_t> degree_start;
  std::unordered_map<std::uint64_t, std::uint32_t> position;
  // (i, j, k) with m_i + m_j = m_k, sorted by deg(m_k)
  std::vector<std::array<std::uint32_t, 3>> products;
  // product_end[d] = number of triples whose result has degree <= d
  std::vector<std::size_t> product_end;
  // derivative[v][i] = position of m_i - e_v, or -1 when m_i[v] == 0
  std::vector<std::vector<std::int32_t>> derivative;
  std::vector<double> factorial_weight;

  std::size_t size_for(int o) const { return degree_start[static_cast<std::size_t>(o) + 1]; }

  static std::uint64_t key(const std::uint8_t* e, int nvars) {
    std::uint64_t k = 0;
    for (int v = 0; v < nvars; ++v) k |= static_cast<std::uint64_t>(e[v]) << (4 * v);
    return k;
  }
};

namespace {

void enumerate_degree(int nvars, int degree, std::vector<std::uint8_t>& out) {
  // Lexicographic (descending in the first variable) within one degree.
  std::vector<std::uint8_t> cur(static_cast<std::size_t>(nvars), 0);
  auto rec = [&](auto&& self, int v, int remaining) -> void {
    if (v == nvars - 1) {
      cur[static_cast<std::size_t>(v)] = static_cast<std::uint8_t>(remaining);
      out.insert(out.end(), cur.begin(), cur.end());
      return;
    }
    for (int e = remaining; e >= 0; --e) {
      cur[static_cast<std::size_t>(v)] = static_cast<std::uint8_t>(e);
      self(self, v + 1, remaining - e);
    }
  };
  if (nvars == 0) return;
  rec(rec, 0, degree);
}

std::shared_ptr<const JetTables> build_tables(int nvars, int order) {
  auto t = std::make_shared<JetTables>();
  t->nvars = nvars;
  t->order = order;
  t->degree_start.push_back(0);
  if (nvars == 0) {
    t->exps.clear();
    t->size = 1;
    t->degree_start.assign(static_cast<std::size_t>(order) + 2, 1);
    t->degree_start[0] = 0;
    t->position[0] = 0;
    t->products.push_back({0, 0, 0});
    t->product_end.assign(static_cast<std::size_t>(order) + 1, 1);
    t->factorial_weight = {1.0};
    return t;
  }
  for (int d = 0; d <= order; ++d) {
    enumerate_degree(nvars, d, t->exps);
    t->degree_start.push_back(t->exps.size() / static_cast<std::size_t>(nvars));
  }
  t->size = t->degree_start.back();
  const auto nv = static_cast<std::size_t>(nvars);
  for (std::size_t i = 0; i < t->size; ++i) {
    t->position[JetTables::key(&t->exps[i * nv], nvars)] = static_cast<std::uint32_t>(i);
  }
  auto degree_of = [&](std::size_t i) {
    int d = 0;
    for (std::size_t v = 0; v < nv; ++v) d += t->exps[i * nv + v];
    return d;
  };
  // products grouped by result degree
  std::vector<std::vector<std::array<std::uint32_t, 3>>> by_degree(static_cast<std::size_t>(order) + 1);
  std::array<std::uint8_t, kMaxJetVariables> sum{};
  for (std::size_t i = 0; i < t->size; ++i) {
    const int di = degree_of(i);
    for (std::size_t j = 0; j < t->size; ++j) {
      const int dj = degree_of(j);
      if (di + dj > order) continue;
      for (std::size_t v = 0; v < nv; ++v) {
        sum[v] = static_cast<std::uint8_t>(t->exps[i * nv + v] + t->exps[j * nv + v]);
      }
      const auto k = t->position.at(JetTables::key(sum.data(), nvars));
      by_degree[static_cast<std::size_t>(di + dj)].push_back(
          {static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), k});
    }
  }
  for (auto& group : by_degree) {
    t->products.insert(t->products.end(), group.begin(), group.end());
    t->product_end.push_back(t->products.size());
  }
  t->derivative.assign(nv, std::vector<std::int32_t>(t->size, -1));
  for (std::size_t v = 0; v < nv; ++v) {
    for (std::size_t i = 0; i < t->size; ++i) {
      if (t->exps[i * nv + v] == 0) continue;
      std::array<std::uint8_t, kMaxJetVariables> m{};
      std::copy_n(&t->exps[i * nv], nv, m.begin());
      m[v] -= 1;
      t->derivative[v][i] = static_cast<std::int32_t>(t->position.at(JetTables::key(m.data(), nvars)));
    }
  }
  t->factorial_weight.resize(t->size);
  for (std::size_t i = 0; i < t->size; ++i) {
    double w = 1.0;
    for (std::size_t v = 0; v < nv; ++v) {
      for (int k = 2; k <= t->exps[i * nv + v]; ++k) w *= k;
    }
    t->factorial_weight[i] = w;
  }
  return t;
}

std::shared_ptr<const JetTables> tables_for(int nvars, int order) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const JetTables>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{nvars, order}];
  if (!slot) slot = build_tables(nvars, order);
  return slot;
}

}  // namespace
}  // namespace detail

struct JetSpace::Impl {
  std::shared_ptr<const std::vector<std::string>> names;
  int order = 0;
  std::shared_ptr<const detail::JetTables> tables;
};

JetSpace::JetSpace(std::vector<std::string> variables, int order) {
  if (order < 0 || order > kMaxJetOrder) {
    throw OrderExceeded("jet order " + std::to_string(order) + " outside [0, " +
                        std::to_string(kMaxJetOrder) + "]");
  }
  if (variables.size() > static_cast<std::size_t>(kMaxJetVariables)) {
    throw Error("too many jet variables: " + std::to_string(variables.size()));
  }
  for (std::size_t i = 0; i < variables.size(); ++i) {
    for (std::size_t j = i + 1; j < variables.size(); ++j) {
      if (variables[i] == variables[j]) throw Error("duplicate jet variable '" + variables[i] + "'");
    }
  }
  auto impl = std::make_shared<Impl>();
  impl->order = order;
  impl->tables = detail::tables_for(static_cast<int>(variables.size()), order);
  impl->names = std::make_shared<const std::vector<std::string>>(std::move(variables));
  impl_ = std::move(impl);
}

const std::vector<std::string>& JetSpace::variables() const noexcept { return *impl_->names; }
int JetSpace::num_variables() const noexcept { return static_cast<int>(impl_->names->size()); }
int JetSpace::order() const noexcept { return impl_->order; }
std::size_t JetSpace::size() const noexcept { return impl_->tables->size; }
const detail::JetTables& JetSpace::tables() const noexcept { return *impl_->tables; }

int JetSpace::variable_index(std::string_view name) const {
  const auto& names = *impl_->names;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return static_cast<int>(i);
  }
  throw UnknownVariable("'" + std::string(name) + "' is not a jet variable");
}

JetSpace JetSpace::with_order(int order) const {
  if (order == impl_->order) return *this;
  if (order < 0 || order > kMaxJetOrder) throw OrderExceeded("jet order " + std::to_string(order));
  auto impl = std::make_shared<Impl>();
  impl->names = impl_->names;
  impl->order = order;
  impl->tables = detail::tables_for(num_variables(), order);
  return JetSpace(std::move(impl));
}

bool JetSpace::same_variables(const JetSpace& other) const noexcept {
  return impl_->names == other.impl_->names || *impl_->names == *other.impl_->names;
}

std::size_t JetSpace::index_of(const MultiIndex& idx) const {
  const int nv = num_variables();
  if (static_cast<int>(idx.size()) != nv) {
    throw Error("multi-index has " + std::to_string(idx.size()) + " entries, expected " +
                std::to_string(nv));
  }
  int degree = 0;
  std::array<std::uint8_t, kMaxJetVariables> e{};
  for (int v = 0; v < nv; ++v) {
    if (idx[static_cast<std::size_t>(v)] < 0) throw Error("negative exponent in multi-index");
    degree += idx[static_cast<std::size_t>(v)];
    if (degree > order()) break;
    e[static_cast<std::size_t>(v)] = static_cast<std::uint8_t>(idx[static_cast<std::size_t>(v)]);
  }
  if (degree > order()) {
    throw OrderExceeded("multi-index of total degree " + std::to_string(degree) +
                        " exceeds jet order " + std::to_string(order()));
  }
  return impl_->tables->position.at(detail::JetTables::key(e.data(), nv));
}

MultiIndex JetSpace::multi_index(std::initializer_list<std::string_view> names) const {
  MultiIndex m(static_cast<std::size_t>(num_variables()), 0);
  for (auto n : names) ++m[static_cast<std::size_t>(variable_index(n))];
  return m;
}

MultiIndex JetSpace::multi_index(std::span<const std::string> names) const {
  MultiIndex m(static_cast<std::size_t>(num_variables()), 0);
  for (const auto& n : names) ++m[static_cast<std::size_t>(variable_index(n))];
  return m;
}

MultiIndex JetSpace::multi_index_at(std::size_t position) const {
  const auto& t = *impl_->tables;
  const auto nv = static_cast<std::size_t>(t.nvars);
  MultiIndex m(nv);
  for (std::size_t v = 0; v < nv; ++v) m[v] = t.exps[position * nv + v];
  return m;
}

// ---------------------------------------------------------------------------

Jet::Jet(JetSpace space, std::vector<double> coeffs) : space_(std::move(space)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != space_.size()) {
    throw Error("jet coefficient count " + std::to_string(coeffs_.size()) + " != space size " +
                std::to_string(space_.size()));
  }
}

Jet Jet::constant(const JetSpace& space, double value) {
  std::vector<double> c(space.size(), 0.0);
  c[0] = value;
  return Jet(space, std::move(c));
}

Jet Jet::variable(const JetSpace& space, std::string_view name, double base) {
  return variable(space, space.variable_index(name), base);
}

Jet Jet::variable(const JetSpace& space, int index, double base) {
  if (index < 0 || index >= space.num_variables()) {
    throw UnknownVariable("variable index " + std::to_string(index));
  }
  std::vector<double> c(space.size(), 0.0);
  c[0] = base;
  if (space.order() >= 1) {
    MultiIndex m(static_cast<std::size_t>(space.num_variables()), 0);
    m[static_cast<std::size_t>(index)] = 1;
    c[space.index_of(m)] = 1.0;
  }
  return Jet(space, std::move(c));
}

double Jet::coefficient(const MultiIndex& idx) const { return coeffs_[space_.index_of(idx)]; }

double Jet::partial(const MultiIndex& idx) const {
  const auto pos = space_.index_of(idx);
  return coeffs_[pos] * space_.tables().factorial_weight[pos];
}

double Jet::partial(std::initializer_list<std::string_view> names) const {
  return partial(space_.multi_index(names));
}

bool Jet::is_constant() const noexcept {
  return std::all_of(coeffs_.begin() + 1, coeffs_.end(), [](double c) { return c == 0.0; });
}

Jet Jet::derivative(int var) const {
  if (var < 0 || var >= space_.num_variables()) throw UnknownVariable("variable index " + std::to_string(var));
  if (order() == 0) throw OrderExceeded("cannot differentiate an order-0 jet");
  const auto& t = space_.tables();
  JetSpace lower = space_.with_order(order() - 1);
  std::vector<double> out(lower.size(), 0.0);
  const auto nv = static_cast<std::size_t>(t.nvars);
  const auto& target = t.derivative[static_cast<std::size_t>(var)];
  for (std::size_t i = 0; i < t.size; ++i) {
    const auto k = target[i];
    if (k < 0 || static_cast<std::size_t>(k) >= out.size()) continue;
    out[static_cast<std::size_t>(k)] = coeffs_[i] * t.exps[i * nv + static_cast<std::size_t>(var)];
  }
  return Jet(std::move(lower), std::move(out));
}

Jet Jet::derivative(std::string_view name) const { return derivative(space_.variable_index(name)); }

Jet Jet::derivative(const MultiIndex& idx) const {
  Jet out = *this;
  for (std::size_t v = 0; v < idx.size(); ++v) {
    for (int k = 0; k < idx[v]; ++k) out = out.derivative(static_cast<int>(v));
  }
  return out;
}

Jet Jet::truncated(int order) const {
  if (order > this->order()) throw OrderExceeded("cannot raise jet order by truncation");
  JetSpace lower = space_.with_order(order);
  return Jet(lower, std::vector<double>(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(lower.size())));
}

namespace {

void check_compatible(const JetSpace& a, const JetSpace& b) {
  if (!a.same_variables(b)) throw Error("jet arithmetic across different variable sets");
}

// Truncates `j` in place to `order` (no-op when already that order).
void truncate_to(Jet& j, int order) {
  if (j.order() != order) j = j.truncated(order);
}

std::vector<double> multiply_coeffs(const detail::JetTables& t, int order, std::span<const double> a,
                                    std::span<const double> b) {
  std::vector<double> out(t.size_for(order), 0.0);
  const std::size_t end = t.product_end[static_cast<std::size_t>(order)];
  for (std::size_t p = 0; p < end; ++p) {
    const auto& tr = t.products[p];
    out[tr[2]] += a[tr[0]] * b[tr[1]];
  }
  return out;
}

}  // namespace

Jet Jet::operator-() const {
  Jet out = *this;
  for (auto& c : out.coeffs_) c = -c;
  return out;
}

Jet& Jet::operator+=(const Jet& other) {
  check_compatible(space_, other.space_);
  if (other.order() < order()) truncate_to(*this, other.order());
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& other) {
  check_compatible(space_, other.space_);
  if (other.order() < order()) truncate_to(*this, other.order());
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

Jet& Jet::operator*=(const Jet& other) {
  check_compatible(space_, other.space_);
  const int o = std::min(order(), other.order());
  // tables of the larger-order space are valid for the prefix
  const auto& t = (order() >= other.order() ? space_ : other.space_).tables();
  auto out = multiply_coeffs(t, o, coeffs_, other.coeffs_);
  space_ = space_.with_order(o);
  coeffs_ = std::move(out);
  return *this;
}

Jet& Jet::operator/=(const Jet& other) { return *this *= reciprocal(other); }

Jet& Jet::operator+=(double c) {
  coeffs_[0] += c;
  return *this;
}
Jet& Jet::operator-=(double c) {
  coeffs_[0] -= c;
  return *this;
}
Jet& Jet::operator*=(double c) {
  for (auto& x : coeffs_) x *= c;
  return *this;
}
Jet& Jet::operator/=(double c) {
  if (c == 0.0) throw DivisionByZero("jet divided by zero scalar");
  for (auto& x : coeffs_) x /= c;
  return *this;
}

Jet operator+(Jet a, const Jet& b) { return a += b; }
Jet operator-(Jet a, const Jet& b) { return a -= b; }
Jet operator*(const Jet& a, const Jet& b) {
  Jet out = a;
  out *= b;
  return out;
}
Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }
Jet operator+(Jet a, double c) { return a += c; }
Jet operator+(double c, Jet a) { return a += c; }
Jet operator-(Jet a, double c) { return a -= c; }
Jet operator-(double c, const Jet& a) { return (-a) += c; }
Jet operator*(Jet a, double c) { return a *= c; }
Jet operator*(double c, Jet a) { return a *= c; }
Jet operator/(Jet a, double c) { return a /= c; }
Jet operator/(double c, const Jet& a) { return reciprocal(a) *= c; }

// ---------------------------------------------------------------------------

std::string_view to_string(ElementaryFunction f) {
  switch (f) {
    case ElementaryFunction::Sqrt: return "sqrt";
    case ElementaryFunction::Exp: return "exp";
    case ElementaryFunction::Log: return "log";
    case ElementaryFunction::Arctan: return "arctan";
    case ElementaryFunction::Sin: return "sin";
    case ElementaryFunction::Cos: return "cos";
    case ElementaryFunction::Pow: return "pow";
  }
  return "?";
}

std::vector<double> taylor_coefficients(ElementaryFunction f, double x0, int order, double exponent) {
  const auto n = static_cast<std::size_t>(order) + 1;
  std::vector<double> c(n, 0.0);
  switch (f) {
    case ElementaryFunction::Sqrt:
      return taylor_coefficients(ElementaryFunction::Pow, x0, order, 0.5);
    case ElementaryFunction::Pow: {
      if (!(x0 > 0.0)) {
        throw DomainError("pow(" + std::to_string(exponent) + ") needs a positive base, got " +
                          std::to_string(x0));
      }
      c[0] = exponent == 0.5 ? std::sqrt(x0) : std::pow(x0, exponent);
      for (std::size_t k = 1; k < n; ++k) {
        c[k] = c[k - 1] * (exponent - static_cast<double>(k - 1)) / (static_cast<double>(k) * x0);
      }
      return c;
    }
    case ElementaryFunction::Exp: {
      c[0] = std::exp(x0);
      for (std::size_t k = 1; k < n; ++k) c[k] = c[k - 1] / static_cast<double>(k);
      return c;
    }
    case ElementaryFunction::Log: {
      if (!(x0 > 0.0)) throw DomainError("log needs a positive argument, got " + std::to_string(x0));
      c[0] = std::log(x0);
      double p = 1.0;
      for (std::size_t k = 1; k < n; ++k) {
        p /= x0;
        c[k] = ((k % 2 == 1) ? 1.0 : -1.0) * p / static_cast<double>(k);
      }
      return c;
    }
    case ElementaryFunction::Sin:
    case ElementaryFunction::Cos: {
      const double s = std::sin(x0);
      const double co = std::cos(x0);
      // derivative cycle of sin: sin, cos, -sin, -cos
      const std::array<double, 4> sin_cycle{s, co, -s, -co};
      const std::size_t shift = f == ElementaryFunction::Sin ? 0 : 1;
      double fact = 1.0;
      for (std::size_t k = 0; k < n; ++k) {
        if (k > 0) fact *= static_cast<double>(k);
        c[k] = sin_cycle[(k + shift) % 4] / fact;
      }
      return c;
    }
    case ElementaryFunction::Arctan: {
      // d/dx atan = 1 / (a + b t + t^2) with a = 1 + x0^2, b = 2 x0
      const double a = 1.0 + x0 * x0;
      const double b = 2.0 * x0;
      std::vector<double> g(n, 0.0);
      g[0] = 1.0 / a;
      for (std::size_t k = 1; k < n; ++k) {
        const double prev2 = k >= 2 ? g[k - 2] : 0.0;
        g[k] = -(b * g[k - 1] + prev2) / a;
      }
      c[0] = std::atan(x0);
      for (std::size_t k = 1; k < n; ++k) c[k] = g[k - 1] / static_cast<double>(k);
      return c;
    }
  }
  return c;
}

namespace {

// sum_k c[k] h^k where h = x - x(0); Horner in jet arithmetic.
Jet compose(const std::vector<double>& c, const Jet& x) {
  Jet h = x;
  h -= x.value();
  Jet result = Jet::constant(x.space(), c.back());
  for (std::size_t k = c.size() - 1; k-- > 0;) {
    result *= h;
    result += c[k];
  }
  return result;
}

bool is_integer(double p) { return std::isfinite(p) && std::floor(p) == p && std::fabs(p) < 1e6; }

}  // namespace

Jet jet_apply(ElementaryFunction f, const Jet& x, double exponent) {
  if (f == ElementaryFunction::Pow && is_integer(exponent)) return pow(x, static_cast<int>(exponent));
  return compose(taylor_coefficients(f, x.value(), x.order(), exponent), x);
}

Jet sqrt(const Jet& x) { return jet_apply(ElementaryFunction::Sqrt, x); }
Jet exp(const Jet& x) { return jet_apply(ElementaryFunction::Exp, x); }
Jet log(const Jet& x) { return jet_apply(ElementaryFunction::Log, x); }
Jet atan(const Jet& x) { return jet_apply(ElementaryFunction::Arctan, x); }
Jet sin(const Jet& x) { return jet_apply(ElementaryFunction::Sin, x); }
Jet cos(const Jet& x) { return jet_apply(ElementaryFunction::Cos, x); }

Jet pow(const Jet& x, double p) {
  if (is_integer(p)) return pow(x, static_cast<int>(p));
  return compose(taylor_coefficients(ElementaryFunction::Pow, x.value(), x.order(), p), x);
}

Jet pow(const Jet& x, int p) {
  if (p < 0) return reciprocal(pow(x, -p));
  Jet result = Jet::constant(x.space(), 1.0);
  Jet base = x;
  unsigned e = static_cast<unsigned>(p);
  while (e != 0) {
    if (e & 1u) result *= base;
    e >>= 1u;
    if (e != 0) base *= base;
  }
  return result;
}

Jet reciprocal(const Jet& x) {
  const double x0 = x.value();
  if (x0 == 0.0) throw DivisionByZero("reciprocal of a jet with zero base value");
  std::vector<double> c(static_cast<std::size_t>(x.order()) + 1);
  double p = 1.0 / x0;
  for (std::size_t k = 0; k < c.size(); ++k) {
    c[k] = (k % 2 == 0 ? 1.0 : -1.0) * p;
    p /= x0;
  }
  return compose(c, x);
}

Jet project(const Jet& j, const JetSpace& target, std::span<const int> source_index) {
  if (static_cast<int>(source_index.size()) != target.num_variables()) {
    throw Error("project: source_index size mismatch");
  }
  const int order = std::min(j.order(), target.order());
  JetSpace out_space = target.with_order(order);
  const auto& st = j.space().tables();
  const auto& tt = out_space.tables();
  const auto snv = static_cast<std::size_t>(st.nvars);
  const auto tnv = static_cast<std::size_t>(tt.nvars);
  std::vector<bool> kept(snv, false);
  for (int s : source_index) kept[static_cast<std::size_t>(s)] = true;
  std::vector<double> out(out_space.size(), 0.0);
  std::array<std::uint8_t, kMaxJetVariables> e{};
  const std::size_t limit = st.size_for(order);
  for (std::size_t i = 0; i < limit; ++i) {
    bool dropped = false;
    for (std::size_t v = 0; v < snv; ++v) {
      if (!kept[v] && st.exps[i * snv + v] != 0) {
        dropped = true;
        break;
      }
    }
    if (dropped) continue;
    for (std::size_t v = 0; v < tnv; ++v) e[v] = st.exps[i * snv + static_cast<std::size_t>(source_index[v])];
    out[tt.position.at(detail::JetTables::key(e.data(), tt.nvars))] = j.coefficients()[i];
  }
  return Jet(std::move(out_space), std::move(out));
}

}  // namespace finsler
