#include "knotcover/povm.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <numbers>
#include <set>

#include "knotcover/error.hpp"

namespace knotcover {

  PauliGroupSpec::PauliGroupSpec(std::vector<std::size_t> factor_dims)
      : factors_(std::move(factor_dims)) {
    if (factors_.empty()) {
      throw Error(ErrorCode::invalid_argument, "Pauli spec needs a factor");
    }
    for (auto m : factors_) {
      if (m < 2) {
        throw Error(ErrorCode::invalid_argument,
                    "Pauli factor dimensions must be >= 2");
      }
    }
  }

  PauliGroupSpec PauliGroupSpec::for_dimension(std::size_t d) {
    if (d == 0) {
      throw Error(ErrorCode::invalid_argument, "dimension must be >= 1");
    }
    PauliGroupSpec spec;
    for (std::size_t p = 2; p * p <= d; ++p) {
      while (d % p == 0) {
        spec.factors_.push_back(p);
        d /= p;
      }
    }
    if (d > 1) {
      spec.factors_.push_back(d);
    }
    return spec;
  }

  std::size_t PauliGroupSpec::dimension() const {
    std::size_t d = 1;
    for (auto m : factors_) {
      d *= m;
    }
    return d;
  }

  namespace {

    Complex root_of_unity(std::size_t m, long long k) {
      double angle = 2 * std::numbers::pi * static_cast<double>(k)
                     / static_cast<double>(m);
      return std::polar(1.0, angle);
    }

    ComplexMatrix kron(ComplexMatrix const& a, ComplexMatrix const& b) {
      ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
      for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
          out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols())
              = a(i, j) * b;
        }
      }
      return out;
    }

    // X^a Z^b on one factor: |j> -> w^(bj) |j+a>.
    ComplexMatrix shift_clock(std::size_t m, std::size_t a, std::size_t b) {
      auto          n = static_cast<Eigen::Index>(m);
      ComplexMatrix out = ComplexMatrix::Zero(n, n);
      for (std::size_t j = 0; j < m; ++j) {
        out(static_cast<Eigen::Index>((j + a) % m), static_cast<Eigen::Index>(j))
            = root_of_unity(m, static_cast<long long>(b * j % m));
      }
      return out;
    }

  }  // namespace

  std::vector<PauliOperator> pauli_group(PauliGroupSpec const& spec) {
    auto const& f = spec.factor_dims();
    std::vector<PauliOperator> out;
    std::vector<std::size_t>   digits(2 * f.size(), 0);
    while (true) {
      PauliOperator op;
      op.matrix = ComplexMatrix::Identity(1, 1);
      for (std::size_t k = 0; k < f.size(); ++k) {
        op.shift.push_back(digits[2 * k]);
        op.clock.push_back(digits[2 * k + 1]);
        op.matrix = kron(op.matrix,
                         shift_clock(f[k], digits[2 * k], digits[2 * k + 1]));
      }
      out.push_back(std::move(op));
      // Odometer with the last digit fastest.
      std::size_t pos = digits.size();
      while (pos > 0) {
        --pos;
        if (++digits[pos] < f[pos / 2]) {
          break;
        }
        digits[pos] = 0;
        if (pos == 0) {
          return out;
        }
      }
      if (digits.empty()) {
        return out;
      }
    }
  }

  StateVector::StateVector(ComplexVector amplitudes)
      : amps_(std::move(amplitudes)) {
    double norm = amps_.norm();
    if (norm == 0) {
      throw Error(ErrorCode::invalid_argument, "zero state vector");
    }
    amps_ /= norm;
    for (Eigen::Index i = 0; i < amps_.size(); ++i) {
      if (std::abs(amps_[i]) > 1e-9) {
        amps_ *= std::conj(amps_[i]) / std::abs(amps_[i]);
        amps_[i] = std::abs(amps_[i]);
        break;
      }
    }
  }

  bool StateVector::approx_equal(StateVector const& other, double tol) const {
    if (dimension() != other.dimension()) {
      return false;
    }
    return (amps_ - other.amps_).cwiseAbs().maxCoeff() <= tol;
  }

  ComplexMatrix permutation_matrix(Permutation const& perm) {
    auto          n   = static_cast<Eigen::Index>(perm.size());
    ComplexMatrix out = ComplexMatrix::Zero(n, n);
    for (std::size_t j = 0; j < perm.size(); ++j) {
      out(static_cast<Eigen::Index>(perm[j]), static_cast<Eigen::Index>(j)) = 1;
    }
    return out;
  }

  namespace {

    std::vector<Permutation> scanned_elements(PermutationRep const& rep,
                                              std::size_t           cap,
                                              bool&                 truncated) {
      auto elements = permutation_group_elements(rep, cap, &truncated);
      if (!truncated) {
        return elements;
      }
      std::vector<Permutation> out = rep.images;
      for (auto const& a : rep.images) {
        for (auto const& b : rep.images) {
          out.push_back(compose(a, b));
        }
      }
      return out;
    }

    // Quantized amplitudes for bucketing near-equal states.
    std::vector<long long> bucket_key(StateVector const& s) {
      std::vector<long long> key;
      key.reserve(2 * s.dimension());
      for (std::size_t i = 0; i < s.dimension(); ++i) {
        key.push_back(std::llround(s[i].real() * 1e7));
        key.push_back(std::llround(s[i].imag() * 1e7));
      }
      return key;
    }

  }  // namespace

  CandidateSet eigenvector_pool(PermutationRep const& rep,
                                std::size_t           element_cap,
                                PovmTolerances const& tol) {
    CandidateSet out;
    auto         elements = scanned_elements(rep, element_cap, out.truncated);
    std::size_t  n        = rep.degree;
    std::set<std::vector<std::uint32_t>>               cycles_seen;
    std::map<std::vector<long long>, std::vector<std::size_t>> buckets;

    for (auto const& g : elements) {
      std::vector<bool> visited(n, false);
      for (std::uint32_t start = 0; start < n; ++start) {
        if (visited[start]) {
          continue;
        }
        std::vector<std::uint32_t> cycle;
        for (auto x = start; !visited[x]; x = g[x]) {
          visited[x] = true;
          cycle.push_back(x);
        }
        if (!cycles_seen.insert(cycle).second) {
          continue;
        }
        std::size_t len   = cycle.size();
        double      scale = 1.0 / std::sqrt(static_cast<double>(len));
        for (std::size_t k = 0; k < len; ++k) {
          ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(n));
          for (std::size_t t = 0; t < len; ++t) {
            v[cycle[t]] = scale
                          * root_of_unity(len, -static_cast<long long>(k * t));
          }
          StateVector s(std::move(v));
          auto&       bucket = buckets[bucket_key(s)];
          bool        dup    = std::any_of(
              bucket.begin(), bucket.end(), [&](std::size_t i) {
                return out.candidates[i].state.approx_equal(s, tol.dedup);
              });
          if (dup) {
            continue;
          }
          bucket.push_back(out.candidates.size());
          out.candidates.push_back({std::move(s), g,
                                    root_of_unity(len, static_cast<long long>(k)),
                                    cycle, k});
        }
      }
    }
    return out;
  }

  bool stabilizer_test(StateVector const& psi, PauliGroupSpec const& spec,
                       PovmTolerances const& tol) {
    std::size_t d = spec.dimension();
    if (psi.dimension() != d) {
      throw Error(ErrorCode::invalid_argument,
                  "state and Pauli group dimensions differ");
    }
    std::size_t count = 0;
    for (auto const& p : pauli_group(spec)) {
      Complex e = psi.amplitudes().dot(p.matrix * psi.amplitudes());
      if (std::abs(std::abs(e) - 1.0) <= tol.stabilizer) {
        ++count;
      }
    }
    return count == d;
  }

  CandidateSet candidate_fiducials(PermutationRep const& rep,
                                   PauliGroupSpec const& spec,
                                   std::size_t           element_cap,
                                   PovmTolerances const& tol) {
    if (spec.dimension() != rep.degree) {
      throw Error(ErrorCode::invalid_argument,
                  "Pauli group dimension differs from the permutation degree");
    }
    auto pool = eigenvector_pool(rep, element_cap, tol);
    std::erase_if(pool.candidates, [&](Candidate const& c) {
      return stabilizer_test(c.state, spec, tol);
    });
    return pool;
  }

  std::vector<ComplexMatrix> pauli_orbit(StateVector const&    psi,
                                         PauliGroupSpec const& spec) {
    if (psi.dimension() != spec.dimension()) {
      throw Error(ErrorCode::invalid_argument,
                  "state and Pauli group dimensions differ");
    }
    std::vector<ComplexMatrix> out;
    for (auto const& p : pauli_group(spec)) {
      ComplexVector v = p.matrix * psi.amplitudes();
      out.push_back(v * v.adjoint());
    }
    return out;
  }

  namespace {

    // Clusters sorted values at gaps above `gap`.
    std::vector<AngleClass> cluster(std::vector<double> values, double gap) {
      std::sort(values.begin(), values.end());
      std::vector<AngleClass> out;
      for (std::size_t i = 0; i < values.size(); ++i) {
        if (i == 0 || values[i] - values[i - 1] > gap) {
          out.push_back({0.0, 0});
        }
        out.back().value += values[i];
        ++out.back().count;
      }
      for (auto& a : out) {
        a.value /= static_cast<double>(a.count);
      }
      return out;
    }

    GramAnalysis analyze(Eigen::MatrixXd const& gram, std::size_t d,
                         PovmTolerances const& tol) {
      GramAnalysis out;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
          gram, Eigen::EigenvaluesOnly);
      Eigen::VectorXd sv      = solver.eigenvalues().cwiseAbs();
      double          largest = sv.size() > 0 ? sv.maxCoeff() : 0.0;
      for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv[i] > tol.rank_relative * largest) {
          ++out.gram_rank;
        }
      }

      std::vector<double> off;
      for (Eigen::Index i = 0; i < gram.rows(); ++i) {
        for (Eigen::Index j = i + 1; j < gram.cols(); ++j) {
          off.push_back(gram(i, j));
        }
      }
      out.angles = cluster(off, tol.pp_gap);
      out.pp     = out.angles.size();
      out.is_ic = out.gram_rank == d * d;
      out.is_equiangular = out.pp == 1;
      double target      = 1.0 / static_cast<double>(d + 1);
      out.is_sic         = !off.empty()
                   && std::all_of(off.begin(), off.end(), [&](double v) {
                        return std::abs(v - target) <= tol.sic;
                      });
      return out;
    }

  }  // namespace

  GramAnalysis gram_analysis(std::span<ComplexMatrix const> projectors,
                             PovmTolerances const&          tol) {
    if (projectors.empty()) {
      throw Error(ErrorCode::invalid_argument, "no projectors");
    }
    auto            n = static_cast<Eigen::Index>(projectors.size());
    Eigen::MatrixXd gram(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i; j < n; ++j) {
        auto const& a = projectors[static_cast<std::size_t>(i)];
        auto const& b = projectors[static_cast<std::size_t>(j)];
        double      v = (a.array() * b.transpose().array()).sum().real();
        gram(i, j)    = v;
        gram(j, i)    = v;
      }
    }
    auto d = static_cast<std::size_t>(projectors.front().rows());
    return analyze(gram, d, tol);
  }

  FieldNormAngles field_norm_angles(Candidate const&      c,
                                    PauliGroupSpec const& spec,
                                    PovmTolerances const& tol) {
    std::size_t d = spec.dimension();
    if (c.state.dimension() != d || c.cycle.empty()) {
      throw Error(ErrorCode::invalid_argument,
                  "candidate does not match the Pauli group dimension");
    }
    auto const& f   = spec.factor_dims();
    std::size_t len = c.cycle.size();
    std::size_t n   = len;
    for (auto m : f) {
      n = std::lcm(n, m);
    }
    auto mod = [n](long long x) {
      auto r = x % static_cast<long long>(n);
      return static_cast<std::size_t>(r < 0 ? r + static_cast<long long>(n) : r);
    };
    // Amplitude exponents in units of 2 pi / n; npos off the support.
    constexpr std::size_t   npos = SIZE_MAX;
    std::vector<std::size_t> expo(d, npos);
    for (std::size_t t = 0; t < len; ++t) {
      expo[c.cycle[t]] = mod(-static_cast<long long>(c.frequency * t * (n / len)));
    }
    std::vector<std::size_t> units;
    for (std::size_t a = 1; a < n; ++a) {
      if (std::gcd(a, n) == 1) {
        units.push_back(a);
      }
    }
    if (n == 1) {
      units.push_back(1);
    }

    // One value per Pauli operator, in pauli_group order.
    std::vector<double>      norm_value;
    std::vector<std::size_t> digits(2 * f.size(), 0);
    std::size_t const        count = d * d;
    for (std::size_t op = 0; op < count; ++op) {
      std::size_t rest = op;
      for (std::size_t k = f.size(); k-- > 0;) {
        digits[2 * k + 1] = rest % f[k];
        rest /= f[k];
        digits[2 * k] = rest % f[k];
        rest /= f[k];
      }
      std::vector<std::size_t> terms;
      for (std::size_t j = 0; j < d; ++j) {
        if (expo[j] == npos) {
          continue;
        }
        // Split j into factor digits, factor 0 most significant.
        std::size_t image = 0;
        std::size_t phase = 0;
        std::size_t x     = j;
        std::size_t place = 1;
        for (std::size_t k = f.size(); k-- > 0;) {
          std::size_t jk = x % f[k];
          x /= f[k];
          image += ((jk + digits[2 * k]) % f[k]) * place;
          place *= f[k];
          phase += digits[2 * k + 1] * jk * (n / f[k]);
        }
        if (expo[image] == npos) {
          continue;
        }
        terms.push_back(mod(static_cast<long long>(phase + expo[j])
                            - static_cast<long long>(expo[image])));
      }
      double log_sum = 0;
      bool   zero    = false;
      for (auto a : units) {
        Complex s = 0;
        for (auto e : terms) {
          s += root_of_unity(n, static_cast<long long>(a * e % n));
        }
        double v = std::norm(s) / static_cast<double>(len * len);
        if (v < 1e-24) {
          zero = true;
          break;
        }
        log_sum += std::log(v);
      }
      norm_value.push_back(
          zero ? 0.0 : std::exp(log_sum / static_cast<double>(units.size())));
    }

    // Pair (i, j) sees the operator with exponent differences j - i.
    auto decode = [&](std::size_t op) {
      std::vector<std::size_t> dg(2 * f.size());
      for (std::size_t k = f.size(); k-- > 0;) {
        dg[2 * k + 1] = op % f[k];
        op /= f[k];
        dg[2 * k] = op % f[k];
        op /= f[k];
      }
      return dg;
    };
    std::vector<std::vector<std::size_t>> dec(count);
    for (std::size_t op = 0; op < count; ++op) {
      dec[op] = decode(op);
    }
    std::vector<double> off;
    off.reserve(count * (count - 1) / 2);
    for (std::size_t i = 0; i < count; ++i) {
      for (std::size_t j = i + 1; j < count; ++j) {
        std::size_t op = 0;
        for (std::size_t k = 0; k < f.size(); ++k) {
          std::size_t da = (dec[j][2 * k] + f[k] - dec[i][2 * k]) % f[k];
          std::size_t db = (dec[j][2 * k + 1] + f[k] - dec[i][2 * k + 1]) % f[k];
          op = (op * f[k] + da) * f[k] + db;
        }
        off.push_back(norm_value[op]);
      }
    }
    FieldNormAngles out;
    out.angles = cluster(std::move(off), tol.pp_gap);
    out.pp     = out.angles.size();
    return out;
  }

  PovmScan povm_scan(SubgroupRecord const& r,
                     PauliGroupSpec const& spec,
                     std::size_t           element_cap,
                     PovmTolerances const& tol) {
    std::size_t d = spec.dimension();
    if (d != r.index) {
      throw Error(ErrorCode::invalid_argument,
                  "Pauli group dimension " + std::to_string(d)
                      + " differs from the subgroup index "
                      + std::to_string(r.index));
    }
    PovmScan scan;
    auto     pool = candidate_fiducials(r.rep, spec, element_cap, tol);
    if (pool.candidates.empty()) {
      pool                 = eigenvector_pool(r.rep, element_cap, tol);
      scan.stabilizer_pool = true;
    }
    scan.truncated = pool.truncated;

    auto           paulis = pauli_group(spec);
    auto           n      = static_cast<Eigen::Index>(paulis.size());
    ComplexMatrix  orbit(static_cast<Eigen::Index>(d), n);
    for (auto const& c : pool.candidates) {
      for (Eigen::Index i = 0; i < n; ++i) {
        orbit.col(i) = paulis[static_cast<std::size_t>(i)].matrix
                       * c.state.amplitudes();
      }
      Eigen::MatrixXd gram = (orbit.adjoint() * orbit).cwiseAbs2();
      PovmReport      rep;
      rep.dimension           = d;
      rep.fiducial            = c.state;
      rep.stabilizer_fiducial = scan.stabilizer_pool;
      rep.gram                = analyze(gram, d, tol);
      rep.field_norm          = field_norm_angles(c, spec, tol);
      scan.reports.push_back(std::move(rep));
    }
    for (std::size_t i = 1; i < scan.reports.size(); ++i) {
      auto const& a = scan.reports[i].gram;
      auto const& b = scan.reports[scan.best].gram;
      if (a.gram_rank > b.gram_rank
          || (a.gram_rank == b.gram_rank && a.pp < b.pp)) {
        scan.best = i;
      }
    }
    return scan;
  }

}  // namespace knotcover
