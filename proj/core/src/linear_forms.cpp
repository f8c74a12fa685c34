#include "maierlab/linear_forms.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "maierlab/numeric.hpp"

namespace maierlab {

namespace {

bool all_zero(const std::vector<std::int64_t>& v) {
  return std::all_of(v.begin(), v.end(), [](std::int64_t c) { return c == 0; });
}

}  // namespace

LinearForm::LinearForm(std::vector<std::int64_t> coeffs, std::int64_t c0)
    : coefficients(std::move(coeffs)), constant(c0) {
  if (coefficients.empty())
    fail(errc::parse_error, "a form needs at least one variable");
  if (all_zero(coefficients))
    fail(errc::parse_error, "constant form rejected: all coefficients zero");
}

std::int64_t LinearForm::evaluate(std::span<const std::int64_t> point) const {
  if (point.size() != coefficients.size())
    fail(errc::range_error, "point dimension mismatch");
  __int128 acc = constant;
  for (size_t j = 0; j < coefficients.size(); ++j)
    acc += static_cast<__int128>(coefficients[j]) * point[j];
  if (acc > INT64_MAX || acc < -INT64_MAX)
    fail(errc::overflow, "form value exceeds 63-bit range");
  return static_cast<std::int64_t>(acc);
}

std::int64_t LinearForm::evaluate_mod(std::span<const std::int64_t> point,
                                      std::int64_t m) const {
  __int128 acc = constant % m;
  for (size_t j = 0; j < coefficients.size(); ++j)
    acc += static_cast<__int128>(coefficients[j] % m) * (point[j] % m);
  auto r = static_cast<std::int64_t>(acc % m);
  return r < 0 ? r + m : r;
}

std::vector<std::int64_t> homogeneous_part(const LinearForm& form) {
  return form.coefficients;
}

LinearSystem::LinearSystem(std::vector<LinearForm> forms)
    : forms_(std::move(forms)) {
  if (forms_.empty()) fail(errc::parse_error, "a system needs at least one form");
  dimension_ = forms_.front().dimension();
  for (const auto& f : forms_)
    if (f.dimension() != dimension_)
      fail(errc::parse_error, "forms disagree on the ambient dimension");
}

std::vector<std::int64_t> LinearSystem::evaluate(
    std::span<const std::int64_t> point) const {
  std::vector<std::int64_t> values;
  values.reserve(forms_.size());
  for (const auto& f : forms_) values.push_back(f.evaluate(point));
  return values;
}

namespace {

// Grammar per line: signed terms joined by +/-, each either an integer,
// "k*xj", "k xj" (implicit *), or a bare "xj". Whitespace-insensitive.
struct TermParser {
  std::string_view s;
  size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool done() {
    skip_ws();
    return pos >= s.size();
  }
  std::int64_t parse_int() {
    skip_ws();
    size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == start) fail(errc::parse_error, "expected integer in form");
    return std::stoll(std::string(s.substr(start, pos - start)));
  }
};

void parse_form_line(std::string_view line, std::vector<std::int64_t>& coeffs,
                     std::int64_t& constant) {
  TermParser tp{line};
  constant = 0;
  while (!tp.done()) {
    std::int64_t sign = 1;
    tp.skip_ws();
    while (tp.pos < tp.s.size() && (tp.s[tp.pos] == '+' || tp.s[tp.pos] == '-')) {
      if (tp.s[tp.pos] == '-') sign = -sign;
      ++tp.pos;
      tp.skip_ws();
    }
    std::int64_t mag = 1;
    bool have_mag = false;
    tp.skip_ws();
    if (tp.pos < tp.s.size() && std::isdigit(static_cast<unsigned char>(tp.s[tp.pos]))) {
      mag = tp.parse_int();
      have_mag = true;
    }
    tp.skip_ws();
    if (tp.pos < tp.s.size() && tp.s[tp.pos] == '*') {
      ++tp.pos;
      tp.skip_ws();
    }
    if (tp.pos < tp.s.size() && (tp.s[tp.pos] == 'x' || tp.s[tp.pos] == 'X')) {
      ++tp.pos;
      std::int64_t idx = tp.parse_int();
      if (idx < 1) fail(errc::parse_error, "variable index must be >= 1");
      if (static_cast<size_t>(idx) > coeffs.size())
        coeffs.resize(static_cast<size_t>(idx), 0);
      coeffs[static_cast<size_t>(idx - 1)] += sign * mag;
    } else if (have_mag) {
      constant += sign * mag;
    } else {
      fail(errc::parse_error, "dangling sign or unknown token in form: " +
                                  std::string(line));
    }
  }
}

}  // namespace

LinearSystem LinearSystem::parse_text(std::string_view text) {
  std::vector<std::vector<std::int64_t>> coeffs;
  std::vector<std::int64_t> constants;
  size_t d = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    std::string_view sv = line;
    if (auto h = sv.find('#'); h != std::string_view::npos) sv = sv.substr(0, h);
    if (sv.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    std::vector<std::int64_t> c;
    std::int64_t c0 = 0;
    parse_form_line(sv, c, c0);
    d = std::max(d, c.size());
    coeffs.push_back(std::move(c));
    constants.push_back(c0);
  }
  if (coeffs.empty()) fail(errc::parse_error, "no forms in input");
  std::vector<LinearForm> forms;
  forms.reserve(coeffs.size());
  for (size_t i = 0; i < coeffs.size(); ++i) {
    coeffs[i].resize(d, 0);
    forms.emplace_back(std::move(coeffs[i]), constants[i]);
  }
  return LinearSystem(std::move(forms));
}

LinearSystem LinearSystem::parse_json(std::string_view json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text, nullptr, false);
  if (j.is_discarded() || !j.is_array() || j.empty())
    fail(errc::parse_error, "expected a JSON array of coefficient rows");
  std::vector<LinearForm> forms;
  for (const auto& row : j) {
    if (!row.is_array() || row.size() < 2)
      fail(errc::parse_error, "each row must be [c1,...,cd,c0]");
    std::vector<std::int64_t> c;
    for (size_t k = 0; k + 1 < row.size(); ++k)
      c.push_back(row[k].get<std::int64_t>());
    forms.emplace_back(std::move(c), row.back().get<std::int64_t>());
  }
  return LinearSystem(std::move(forms));
}

LinearSystem LinearSystem::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(errc::parse_error, "cannot open system file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  std::string text = ss.str();
  auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '[')
    return parse_json(text);
  return parse_text(text);
}

std::string LinearSystem::to_text() const {
  std::ostringstream out;
  for (const auto& f : forms_) {
    out << f.constant;
    for (int j = 0; j < dimension_; ++j)
      out << " + " << f.coefficients[static_cast<size_t>(j)] << "*x" << (j + 1);
    out << '\n';
  }
  return out.str();
}

LinearSystem k_term_ap(int k) {
  std::vector<LinearForm> forms;
  for (int i = 0; i < k; ++i)
    forms.push_back(LinearForm({1, i}, 0));
  return LinearSystem(std::move(forms));
}

namespace {

// Pairwise proportionality over Q via 2x2 minors, exact.
bool proportional(const std::vector<std::int64_t>& a,
                  const std::vector<std::int64_t>& b) {
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = i + 1; j < a.size(); ++j) {
      __int128 m = static_cast<__int128>(a[i]) * b[j] -
                   static_cast<__int128>(a[j]) * b[i];
      if (m != 0) return false;
    }
  return true;
}

// Is v in the affine span of the vectors in cls? Solve sum(l_j w_j) = v,
// sum(l_j) = 1 by rational Gaussian elimination on the augmented system.
bool in_affine_span(const std::vector<std::int64_t>& v,
                    const std::vector<const std::vector<std::int64_t>*>& cls) {
  size_t d = v.size();
  size_t k = cls.size();
  size_t rows = d + 1;
  // Matrix (rows x k), rhs (rows).
  std::vector<std::vector<Rational>> m(rows, std::vector<Rational>(k));
  std::vector<Rational> rhs(rows);
  for (size_t r = 0; r < d; ++r) {
    for (size_t c = 0; c < k; ++c) m[r][c] = (*cls[c])[r];
    rhs[r] = v[r];
  }
  for (size_t c = 0; c < k; ++c) m[d][c] = 1;
  rhs[d] = 1;

  size_t rank_row = 0;
  for (size_t col = 0; col < k && rank_row < rows; ++col) {
    size_t piv = rank_row;
    while (piv < rows && m[piv][col] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(m[piv], m[rank_row]);
    std::swap(rhs[piv], rhs[rank_row]);
    Rational inv = m[rank_row][col];
    for (size_t r = rank_row + 1; r < rows; ++r) {
      if (m[r][col] == 0) continue;
      Rational factor = m[r][col] / inv;
      for (size_t c2 = col; c2 < k; ++c2) m[r][c2] -= factor * m[rank_row][c2];
      rhs[r] -= factor * rhs[rank_row];
    }
    ++rank_row;
  }
  // Consistent iff no row with zero coefficients but nonzero rhs.
  for (size_t r = 0; r < rows; ++r) {
    bool zero_row = std::all_of(m[r].begin(), m[r].end(),
                                [](const Rational& q) { return q == 0; });
    if (zero_row && rhs[r] != 0) return false;
  }
  return true;
}

// Minimal class count for one pivot: smallest k such that the m other parts
// split into k nonempty classes with the pivot outside every class's affine
// span. Enumerates restricted-growth strings for exactly k classes.
int min_classes_for_pivot(const std::vector<std::int64_t>& pivot,
                          const std::vector<std::vector<std::int64_t>>& others) {
  int m = static_cast<int>(others.size());
  for (int k = 1; k <= m; ++k) {
    std::vector<int> rgs(static_cast<size_t>(m), 0);
    // Iterate restricted-growth strings; keep only those using exactly k labels.
    for (;;) {
      int maxlab = 0;
      for (int lab : rgs) maxlab = std::max(maxlab, lab);
      if (maxlab == k - 1) {
        bool ok = true;
        for (int lab = 0; lab < k && ok; ++lab) {
          std::vector<const std::vector<std::int64_t>*> cls;
          for (int i = 0; i < m; ++i)
            if (rgs[static_cast<size_t>(i)] == lab)
              cls.push_back(&others[static_cast<size_t>(i)]);
          if (in_affine_span(pivot, cls)) ok = false;
        }
        if (ok) return k;
      }
      // next RGS
      int i = m - 1;
      while (i > 0) {
        int prefix_max = 0;
        for (int j = 0; j < i; ++j)
          prefix_max = std::max(prefix_max, rgs[static_cast<size_t>(j)]);
        if (rgs[static_cast<size_t>(i)] <= prefix_max &&
            rgs[static_cast<size_t>(i)] < k - 1) {
          ++rgs[static_cast<size_t>(i)];
          for (int j = i + 1; j < m; ++j) rgs[static_cast<size_t>(j)] = 0;
          break;
        }
        --i;
      }
      if (i == 0) break;
    }
  }
  // Singletons always work once pairwise proportionality is excluded, so we
  // never get here for a finite-complexity system.
  return m;
}

}  // namespace

bool is_finite_complexity(const LinearSystem& system) {
  const auto& forms = system.forms();
  for (size_t i = 0; i < forms.size(); ++i)
    for (size_t j = i + 1; j < forms.size(); ++j)
      if (proportional(forms[i].coefficients, forms[j].coefficients))
        return false;
  return true;
}

Complexity complexity(const LinearSystem& system, int max_partition_size) {
  if (!is_finite_complexity(system)) return Complexity::infinite();
  int t = system.size();
  if (t == 1) return {true, 0};
  if (t - 1 > max_partition_size)
    fail(errc::system_too_large,
         "exhaustive partition search limited to " +
             std::to_string(max_partition_size) + " forms per pivot");
  int s = 0;
  for (int i = 0; i < t; ++i) {
    std::vector<std::vector<std::int64_t>> others;
    for (int j = 0; j < t; ++j)
      if (j != i) others.push_back(system.form(j).coefficients);
    s = std::max(s, min_classes_for_pivot(system.form(i).coefficients, others) - 1);
  }
  return {true, s};
}

}  // namespace maierlab
