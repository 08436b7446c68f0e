#pragma once

#include <torific/hahn_series.hpp>

#include <optional>
#include <string>
#include <vector>

namespace torific {

/// A verified pseudo-convergent sequence: consecutive differences have
/// strictly increasing valuations (the gauges w_tau).
template <class K>
struct PseudoSequence {
    std::vector<HahnSeries<K>> elements;
    std::vector<GroupElement> gauges; // w_tau = nu(y_{tau+1} - y_tau)
};

struct PseudoViolation {
    size_t index;        // first tau where the gauge condition fails
    std::string message;
};

template <class K>
struct PseudoCheckResult {
    std::optional<PseudoSequence<K>> sequence; // set on success
    std::optional<PseudoViolation> violation;  // set on failure
    bool ok() const { return sequence.has_value(); }
};

/// Check that nu(y_{tau+1} - y_tau) is strictly increasing in tau. Each gauge
/// must be resolvable below the cutoffs involved: a zero difference (within
/// cutoff) is reported as a violation since its valuation is not witnessed.
template <class K>
PseudoCheckResult<K> check_pseudo_convergent(const std::vector<HahnSeries<K>>& ys)
{
    PseudoCheckResult<K> res;
    if (ys.size() < 2) {
        res.violation = PseudoViolation{0, "sequence needs at least two elements"};
        return res;
    }
    PseudoSequence<K> seq;
    seq.elements = ys;
    for (size_t tau = 0; tau + 1 < ys.size(); ++tau) {
        HahnSeries<K> d = ys[tau + 1] - ys[tau];
        Valuation v = d.valuation();
        if (v.is_infinity()) {
            res.violation = PseudoViolation{
                tau, "difference y_" + std::to_string(tau + 1) + " - y_" + std::to_string(tau) +
                         " vanishes below the cutoff; gauge not witnessed"};
            return res;
        }
        if (!seq.gauges.empty() && !less(seq.gauges.back(), *v.value)) {
            res.violation = PseudoViolation{
                tau, "gauge at tau=" + std::to_string(tau) + " does not strictly increase"};
            return res;
        }
        seq.gauges.push_back(*v.value);
    }
    res.sequence = std::move(seq);
    return res;
}

/// z is a (pseudo-)limit iff nu(z - y_tau) >= w_tau for every tau.
/// Requires each difference to be exact up to w_tau, i.e. cutoffs above it.
template <class K>
bool is_limit(const PseudoSequence<K>& seq, const HahnSeries<K>& z)
{
    for (size_t tau = 0; tau + 1 < seq.elements.size(); ++tau) {
        HahnSeries<K> d = z - seq.elements[tau];
        if (less(d.cutoff(), seq.gauges[tau]))
            throw series_error("is_limit: cutoff too small to certify gauge");
        if (!valuation_geq(d.valuation(), seq.gauges[tau])) return false;
    }
    return true;
}

/// For a limit z, nu(z - y_tau) == w_tau exactly (the standard sharpening of
/// the limit property for strictly pseudo-convergent sequences).
template <class K>
bool limit_difference_check(const PseudoSequence<K>& seq, const HahnSeries<K>& z)
{
    for (size_t tau = 0; tau + 1 < seq.elements.size(); ++tau) {
        HahnSeries<K> d = z - seq.elements[tau];
        if (less(d.cutoff(), seq.gauges[tau]))
            throw series_error("limit_difference_check: cutoff too small");
        Valuation v = d.valuation();
        if (v.is_infinity() || !(*v.value == seq.gauges[tau])) return false;
    }
    return true;
}

} // namespace torific
