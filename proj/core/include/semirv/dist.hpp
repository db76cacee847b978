#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "semirv/rng.hpp"
#include "semirv/tailfn.hpp"

namespace semirv {

enum class DistKind { Continuous, Lattice };

// Membership in the exponential-class split: L11 = regularly varying f with
// gamma >= -1 and divergent integral; L1Not11 = divergent integral but f not
// regularly varying; L2 = convergent integral.
enum class ClassTag { L11, L1Not11, L2 };

struct SampleBatch {
    std::vector<double> values;
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;

    // Single-column CSV: "# seed=..., stream=..." comment, then "value".
    void write_csv(std::ostream& out) const;
};

// Distribution with tail exactly min(1, e^(-alpha x) f(x)) on [x0, inf),
// where x0 is the smallest point from which that envelope is <= 1 and
// nonincreasing.  Below x0 the tail is 1; the defect 1 - e^(-alpha x0) f(x0)
// (zero for most families) sits as an atom at x0.  Lattice distributions
// live on the integers with cutoff ceil(x0).
class SemiRVDistribution {
  public:
    static SemiRVDistribution make(double alpha, TailFunctionSpec f, DistKind kind);

    double alpha() const { return alpha_; }
    const TailFunctionSpec& f() const { return f_; }
    DistKind dist_kind() const { return kind_; }
    ClassTag class_tag() const { return class_tag_; }
    double head_cutoff() const { return x0_; }
    double atom_mass() const { return atom_; }
    long long lattice_cutoff() const { return k0_; }

    double tail(double x) const;      // P(X > x)
    double log_tail(double x) const;  // ln of the above (0 for x < cutoff)

    // Left tail P(X >= x); differs from tail only across the head atom.
    double tail_left(double x) const;

    double density(double x) const;   // continuous only
    double pmf(long long k) const;    // lattice only

    // x with tail(x) = 1 - u, solved to 1e-12 absolute in x (continuous);
    // smallest integer k with tail(k) <= 1 - u (lattice).
    double quantile(double u) const;

    SampleBatch sample(std::uint64_t seed, std::uint64_t stream_id,
                       std::size_t count) const;
    double sample_one(CounterRng& rng) const { return quantile(rng.next_double()); }

    // int_{x0}^{s} e^(alpha y) dV(y): quadrature of alpha f - f' for the
    // continuous kind, exact telescoped sum for the lattice kind.  Head atom
    // included.  Requires s > x0.
    double exp_moment_partial(double s) const;

  private:
    SemiRVDistribution(double alpha, TailFunctionSpec f, DistKind kind);

    void build_quantile_cache();
    double quantile_continuous(double u) const;
    double quantile_lattice(double u) const;

    double alpha_;
    TailFunctionSpec f_;
    DistKind kind_;
    double x0_ = 0.0;
    double atom_ = 0.0;
    long long k0_ = 0;
    ClassTag class_tag_;
    std::vector<double> quantile_cache_;  // at u = i/kCacheSize
    static constexpr std::size_t kCacheSize = 1024;
};

}  // namespace semirv
