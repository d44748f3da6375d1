#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "knotcover/enumerate.hpp"
#include "knotcover/lowindex.hpp"

namespace knotcover {

  using Complex       = std::complex<double>;
  using ComplexMatrix = Eigen::MatrixXcd;
  using ComplexVector = Eigen::VectorXcd;

  struct PovmTolerances {
    double rank_relative = 1e-8;
    double sic           = 1e-8;
    double pp_gap        = 1e-6;
    double stabilizer    = 1e-9;
    double dedup         = 1e-9;
  };

  // Tensor factor dimensions of a composite Pauli group.
  class PauliGroupSpec {
   public:
    // Throws Error(invalid_argument) on an empty list or a factor below 2.
    explicit PauliGroupSpec(std::vector<std::size_t> factor_dims);

    // Prime factorization in increasing order. d = 1 gives no factors.
    static PauliGroupSpec for_dimension(std::size_t d);

    std::vector<std::size_t> const& factor_dims() const {
      return factors_;
    }
    std::size_t dimension() const;

   private:
    PauliGroupSpec() = default;
    std::vector<std::size_t> factors_;
  };

  struct PauliOperator {
    std::vector<std::size_t> shift;  // a_k per factor
    std::vector<std::size_t> clock;  // b_k per factor
    ComplexMatrix            matrix;
  };

  // All d^2 operators, factor 0 most significant, shift before clock;
  // the identity comes first.
  std::vector<PauliOperator> pauli_group(PauliGroupSpec const& spec);

  // Unit vector with its first nonzero amplitude real and positive.
  class StateVector {
   public:
    StateVector() = default;
    // Normalizes and fixes the global phase. Throws on a zero vector.
    explicit StateVector(ComplexVector amplitudes);

    std::size_t dimension() const {
      return static_cast<std::size_t>(amps_.size());
    }
    ComplexVector const& amplitudes() const {
      return amps_;
    }
    Complex operator[](std::size_t i) const {
      return amps_[static_cast<Eigen::Index>(i)];
    }
    // Largest amplitude difference at most tol.
    bool approx_equal(StateVector const& other, double tol) const;

   private:
    ComplexVector amps_;
  };

  // Entry (perm(j), j) is 1.
  ComplexMatrix permutation_matrix(Permutation const& perm);

  struct Candidate {
    StateVector state;
    Permutation source;      // group element whose matrix has it as eigenvector
    Complex     eigenvalue;  // for permutation_matrix(source)
    // Exact form: amplitude exp(-2 pi i frequency t / L) / sqrt(L) at
    // cycle[t], L = cycle.size(), zero elsewhere (up to global phase).
    std::vector<std::uint32_t> cycle;
    std::size_t                frequency = 0;
  };

  struct CandidateSet {
    std::vector<Candidate> candidates;
    // The image exceeded the element cap; generators and their pairwise
    // products were used instead.
    bool truncated = false;
  };

  // Cycle-wise Fourier eigenvectors of the permutation matrices of the
  // image, deduplicated up to phase, in generation order.
  CandidateSet eigenvector_pool(PermutationRep const& rep,
                                std::size_t           element_cap = 20'000,
                                PovmTolerances const& tol = {});

  // eigenvector_pool with stabilizer states removed.
  CandidateSet candidate_fiducials(PermutationRep const& rep,
                                   PauliGroupSpec const& spec,
                                   std::size_t           element_cap = 20'000,
                                   PovmTolerances const& tol = {});

  bool stabilizer_test(StateVector const& psi, PauliGroupSpec const& spec,
                       PovmTolerances const& tol = {});

  // P|psi><psi|P^dagger for every Pauli operator, in pauli_group order.
  std::vector<ComplexMatrix> pauli_orbit(StateVector const&    psi,
                                         PauliGroupSpec const& spec);

  struct AngleClass {
    double      value = 0;  // mean |<psi_i|psi_j>|^2 of the cluster
    std::size_t count = 0;  // unordered pairs
  };

  struct GramAnalysis {
    std::size_t             gram_rank = 0;
    std::size_t             pp        = 0;
    bool                    is_ic     = false;
    bool                    is_equiangular = false;
    bool                    is_sic         = false;
    std::vector<AngleClass> angles;
  };

  // Gram matrix tr(P_i P_j) of d^2 rank-one projectors.
  GramAnalysis gram_analysis(std::span<ComplexMatrix const> projectors,
                             PovmTolerances const&          tol = {});

  // Off-diagonal Gram values replaced by their field-norm means: the
  // geometric mean of all Galois conjugates over the cyclotomic field that
  // holds the amplitudes. Conjugate values collapse into one class.
  struct FieldNormAngles {
    std::size_t             pp = 0;
    std::vector<AngleClass> angles;
  };

  FieldNormAngles field_norm_angles(Candidate const&      c,
                                    PauliGroupSpec const& spec,
                                    PovmTolerances const& tol = {});

  struct PovmReport {
    std::size_t     dimension = 0;
    StateVector     fiducial;
    bool            stabilizer_fiducial = false;
    GramAnalysis    gram;
    FieldNormAngles field_norm;
  };

  struct PovmScan {
    std::vector<PovmReport> reports;
    std::size_t             best = 0;
    bool                    truncated = false;
    // No magic candidates existed; stabilizer eigenvectors were scanned.
    bool                    stabilizer_pool = false;

    PovmReport const& best_report() const {
      return reports.at(best);
    }
  };

  // Best report: maximal rank, then minimal pp, then generation order.
  // Throws Error(invalid_argument) if spec dimension differs from the index.
  PovmScan povm_scan(SubgroupRecord const& r,
                     PauliGroupSpec const& spec,
                     std::size_t           element_cap = 20'000,
                     PovmTolerances const& tol = {});

}  // namespace knotcover
