#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace weylab {

using Rational = boost::rational<std::int64_t>;

double to_double(const Rational& r);
std::string to_string(const Rational& r);

// Thrown when an operation is called outside its documented precondition.
class RejectedInput : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// Extended Lebesgue exponent in (0, inf], stored through its reciprocal.
class Exponent {
  public:
    Exponent() = default;

    static Exponent from_reciprocal(Rational r);
    static Exponent from_value(Rational p);
    static Exponent infinity() { return from_reciprocal(Rational(0)); }
    // Accepts "inf", integers, fractions "a/b" and finite decimals "1.25".
    static Exponent parse(std::string_view text);

    const Rational& reciprocal() const { return recip_; }
    double reciprocal_value() const { return to_double(recip_); }
    bool is_infinite() const { return recip_ == Rational(0); }
    bool is_banach() const { return recip_ <= 1; }
    double value() const;
    std::string str() const;

    friend bool operator==(const Exponent& a, const Exponent& b) { return a.recip_ == b.recip_; }

  private:
    explicit Exponent(Rational r) : recip_(r) {}
    Rational recip_{0};
};

Exponent conjugate(const Exponent& p);

class ExponentTuple {
  public:
    ExponentTuple() = default;
    explicit ExponentTuple(std::vector<Exponent> entries);

    static ExponentTuple from_reciprocals(const std::vector<Rational>& x);
    // Comma separated list of exponent literals, e.g. "2,inf,2,2".
    static ExponentTuple parse(std::string_view text);

    int N() const { return static_cast<int>(entries_.size()) - 1; }
    std::size_t size() const { return entries_.size(); }
    const Exponent& operator[](std::size_t j) const { return entries_[j]; }
    const std::vector<Exponent>& entries() const { return entries_; }

    std::vector<Rational> reciprocals() const;
    std::vector<Rational> conjugate_reciprocals() const;
    ExponentTuple conjugated() const;
    std::string str() const;

    friend bool operator==(const ExponentTuple& a, const ExponentTuple& b) { return a.entries_ == b.entries_; }

  private:
    std::vector<Exponent> entries_;
};

// (sum_j x_j - 1) / (N - 1)
Rational rn(int N, const std::vector<Rational>& x);

struct QnValue {
    Rational q0;
    Rational q;
    std::pair<int, int> q0_argmin{0, 1};
    std::pair<int, int> q_argmin{0, 1};
};

// Minima over ordered index pairs (j, k) with j + k odd.
QnValue qn(int N, const std::vector<Rational>& x, const std::vector<Rational>& y);

enum class Criterion { bilinear_base, cotowa_2_5, prop_a, thm_b, twist, prop2_pattern };

std::string to_string(Criterion c);
Criterion parse_criterion(std::string_view name);
const std::vector<Criterion>& all_criteria();

struct ConditionReport {
    Criterion criterion{Criterion::thm_b};
    bool holds{false};
    Rational lhs;
    Rational rhs;
    std::map<std::string, Rational> detail;
    std::map<std::string, std::pair<int, int>> minimizers;
};

ConditionReport check_conditions(Criterion criterion, const ExponentTuple& p, const ExponentTuple& q);

ExponentTuple pattern_exponents(int N, const Exponent& p, int variant);

enum class PairMode { odd_pairs, all_pairs };

struct LemmaProfile {
    bool c1{false};
    bool c2{false};
    bool c3{false};
};

LemmaProfile lemma_profile(int N, const std::vector<Rational>& x, PairMode mode);

enum class InterpolationBranch { theta_zero, delegated_2_5, endpoint_mix, infeasible };

std::string to_string(InterpolationBranch b);

struct InterpolationCertificate {
    Rational theta;
    Exponent v;
    ExponentTuple r;
    ExponentTuple s;
    bool feasible{false};
    // Largest violation of the interpolation identities, the sum conditions
    // and the [0,1] range of the reciprocals of r and s. Zero when feasible.
    Rational residual;
    InterpolationBranch branch{InterpolationBranch::infeasible};
    int grid_points_tried{0};
};

// The rational grid of v values scanned by construct_interpolation, ascending,
// infinity last.
const std::vector<Exponent>& interpolation_v_grid();

// Recomputes the violation of the interpolation conditions for a candidate
// (theta, v, r, s) against (p, q). Independent of how the candidate was found.
Rational interpolation_residual(const ExponentTuple& p, const ExponentTuple& q, const Rational& theta,
                                const Exponent& v, const ExponentTuple& r, const ExponentTuple& s);

InterpolationCertificate construct_interpolation(const ExponentTuple& p, const ExponentTuple& q);

} // namespace weylab
