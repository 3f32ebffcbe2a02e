#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "trustnet/error.hpp"
#include "trustnet/uncertainty.hpp"

namespace trustnet {

// Piecewise-linear membership function: triangular (a,b,c) or trapezoidal
// (a,b,c,d). Degenerate edges (a==b, c==d) act as vertical shoulders, which
// is what makes full coverage at the universe bounds possible.
class MembershipFunction {
public:
    static MembershipFunction triangular(double a, double b, double c) {
        return MembershipFunction(a, b, b, c, /*trapezoid=*/false);
    }

    static MembershipFunction trapezoidal(double a, double b, double c, double d) {
        return MembershipFunction(a, b, c, d, /*trapezoid=*/true);
    }

    double evaluate(double x) const {
        if (x < a_ || x > d_) return 0.0;
        if (x < b_) return (x - a_) / (b_ - a_); // a_ < b_ here, else x < b_ is impossible
        if (x <= c_) return 1.0;
        return (d_ - x) / (d_ - c_);
    }

    double support_lo() const { return a_; }
    double support_hi() const { return d_; }
    bool is_trapezoid() const { return trapezoid_; }

    // (a,b,c) for triangles, (a,b,c,d) for trapezoids.
    std::vector<double> parameters() const {
        if (trapezoid_) return {a_, b_, c_, d_};
        return {a_, b_, d_};
    }

    // Area and first moment of y = min(evaluate(x), clip), by exact
    // integration of the linear pieces. clip = 1 gives the plain term.
    std::pair<double, double> clipped_area_moment(double clip) const {
        if (clip <= 0.0) return {0.0, 0.0};
        double area = 0.0, moment = 0.0;
        auto accumulate_segment = [&](double x0, double y0, double x1, double y1) {
            if (x1 <= x0) return;
            double h = x1 - x0;
            double dy = y1 - y0;
            area += h * (y0 + 0.5 * dy);
            moment += h * (x0 * y0 + 0.5 * (x0 * dy + h * y0) + h * dy / 3.0);
        };
        // clipped rising edge: hits `clip` at xr
        double xr = b_;
        if (b_ > a_) {
            xr = a_ + clip * (b_ - a_);
            accumulate_segment(a_, 0.0, xr, clip);
        }
        // clipped falling edge: leaves `clip` at xf
        double xf = c_;
        if (d_ > c_) {
            xf = d_ - clip * (d_ - c_);
            accumulate_segment(xf, clip, d_, 0.0);
        }
        accumulate_segment(xr, clip, xf, clip); // plateau (possibly empty)
        return {area, moment};
    }

    // Center of gravity of the unclipped term, exact.
    double centroid() const {
        auto [area, moment] = clipped_area_moment(1.0);
        if (area <= 0.0)
            throw empty_inference_error("membership function has zero area");
        return moment / area;
    }

    bool operator==(const MembershipFunction&) const = default;

private:
    MembershipFunction(double a, double b, double c, double d, bool trapezoid)
        : a_(a), b_(b), c_(c), d_(d), trapezoid_(trapezoid) {
        if (!(std::isfinite(a) && std::isfinite(b) && std::isfinite(c) && std::isfinite(d)))
            throw input_error("non-finite membership parameters");
        if (!(a <= b && b <= c && c <= d))
            throw input_error("membership parameters must be ordered a <= b (<= c) <= d");
        if (a == d)
            throw input_error("membership function with empty support");
    }

    double a_, b_, c_, d_;
    bool trapezoid_;
};

// A named variable over a closed interval with a term set covering it.
class LinguisticVariable {
public:
    LinguisticVariable(std::string name, double lo, double hi,
                       std::vector<std::pair<std::string, MembershipFunction>> terms)
        : name_(std::move(name)), lo_(lo), hi_(hi), terms_(std::move(terms)) {
        if (!(lo_ < hi_))
            throw input_error("variable '" + name_ + "': universe lo must be < hi");
        if (terms_.empty())
            throw input_error("variable '" + name_ + "' has no terms");
        for (const auto& [term, mf] : terms_) {
            if (mf.support_lo() < lo_ - kEdgeTol || mf.support_hi() > hi_ + kEdgeTol)
                throw input_error("variable '" + name_ + "': term '" + term +
                                  "' exceeds the universe");
        }
    }

    const std::string& name() const { return name_; }
    double lo() const { return lo_; }
    double hi() const { return hi_; }
    const std::vector<std::pair<std::string, MembershipFunction>>& terms() const {
        return terms_;
    }

    const MembershipFunction* find_term(const std::string& term) const {
        for (const auto& [t, mf] : terms_)
            if (t == term) return &mf;
        return nullptr;
    }

    // Every universe point must belong to some term with membership > 0.
    // Checked on a uniform grid (endpoints included).
    bool covers_universe(int grid = 101, double* gap = nullptr) const {
        for (int i = 0; i < grid; ++i) {
            double x = lo_ + (hi_ - lo_) * static_cast<double>(i) / (grid - 1);
            double best = 0.0;
            for (const auto& [term, mf] : terms_) best = std::max(best, mf.evaluate(x));
            if (best <= 0.0) {
                if (gap) *gap = x;
                return false;
            }
        }
        return true;
    }

    bool operator==(const LinguisticVariable&) const = default;

private:
    static constexpr double kEdgeTol = 1e-12;

    std::string name_;
    double lo_, hi_;
    std::vector<std::pair<std::string, MembershipFunction>> terms_;
};

// IF var1 is term1 AND var2 is term2 ... THEN output is consequent_term.
struct FuzzyRule {
    std::vector<std::pair<std::string, std::string>> antecedents;
    std::string consequent_term;

    bool operator==(const FuzzyRule&) const = default;
};

using FuzzifiedValue = std::map<std::string, double>; // term -> degree

// Evaluates each term's membership at `value`. Values are clamped to the
// universe; degrees land in [0,1] by construction.
inline FuzzifiedValue fuzzify(double value, const LinguisticVariable& variable) {
    if (!std::isfinite(value))
        throw input_error("cannot fuzzify non-finite value for '" + variable.name() + "'");
    double x = std::clamp(value, variable.lo(), variable.hi());
    FuzzifiedValue out;
    for (const auto& [term, mf] : variable.terms()) out[term] = mf.evaluate(x);
    return out;
}

// Mamdani aggregate: pointwise max over consequent terms clipped at their
// rule firing strengths. Kept symbolic so integration can be done at any
// resolution without re-running inference.
class AggregateFuzzySet {
public:
    struct ClippedTerm {
        MembershipFunction term;
        double strength;
    };

    explicit AggregateFuzzySet(std::vector<ClippedTerm> parts) : parts_(std::move(parts)) {}

    double evaluate(double x) const {
        double best = 0.0;
        for (const auto& p : parts_) best = std::max(best, std::min(p.strength, p.term.evaluate(x)));
        return best;
    }

    bool empty() const { return parts_.empty(); }

    double support_lo() const {
        double lo = 1.0;
        for (const auto& p : parts_) lo = std::min(lo, p.term.support_lo());
        return lo;
    }

    double support_hi() const {
        double hi = 0.0;
        for (const auto& p : parts_) hi = std::max(hi, p.term.support_hi());
        return hi;
    }

    const std::vector<ClippedTerm>& parts() const { return parts_; }

private:
    std::vector<ClippedTerm> parts_;
};

// Inputs, one output over [0,1], and the rules connecting them.
class RuleBase {
public:
    RuleBase(std::vector<LinguisticVariable> inputs, LinguisticVariable output,
             std::vector<FuzzyRule> rules)
        : inputs_(std::move(inputs)), output_(std::move(output)), rules_(std::move(rules)) {
        if (inputs_.empty()) throw input_error("rule base has no input variables");
        if (rules_.empty()) throw input_error("rule base has no rules");
        if (output_.lo() != 0.0 || output_.hi() != 1.0)
            throw input_error("output universe must be exactly [0,1]");
        for (const auto& rule : rules_) {
            if (rule.antecedents.empty())
                throw input_error("rule with empty antecedent");
            for (const auto& [var, term] : rule.antecedents) {
                const auto* v = find_input(var);
                if (!v) throw taxonomy_error("rule references unknown variable '" + var + "'");
                if (!v->find_term(term))
                    throw taxonomy_error("rule references unknown term '" + var + "." + term + "'");
            }
            if (!output_.find_term(rule.consequent_term))
                throw taxonomy_error("rule consequent '" + rule.consequent_term + "' not an output term");
        }
    }

    const std::vector<LinguisticVariable>& inputs() const { return inputs_; }
    const LinguisticVariable& output() const { return output_; }
    const std::vector<FuzzyRule>& rules() const { return rules_; }

    const LinguisticVariable* find_input(const std::string& name) const {
        for (const auto& v : inputs_)
            if (v.name() == name) return &v;
        return nullptr;
    }

    struct CompletenessGap {
        std::string variable; // empty when complete
        std::vector<double> point;
    };

    // Walks a uniform grid over the joint input space and checks that at
    // least one rule fires with strength > 0 everywhere. Also checks each
    // variable's term coverage, which pins gaps to a variable by name.
    // grid_per_axis = 0 picks a density based on the input count.
    CompletenessGap completeness_gap(int grid_per_axis = 0) const {
        if (grid_per_axis <= 0) grid_per_axis = inputs_.size() == 1 ? 201 : 21;
        for (const auto& v : inputs_) {
            double gap = 0.0;
            if (!v.covers_universe(101, &gap)) return {v.name(), {gap}};
        }
        std::vector<double> point(inputs_.size(), 0.0);
        std::vector<int> idx(inputs_.size(), 0);
        while (true) {
            for (std::size_t i = 0; i < inputs_.size(); ++i) {
                const auto& v = inputs_[i];
                point[i] = v.lo() + (v.hi() - v.lo()) * static_cast<double>(idx[i]) / (grid_per_axis - 1);
            }
            std::map<std::string, FuzzifiedValue> degrees;
            for (std::size_t i = 0; i < inputs_.size(); ++i)
                degrees[inputs_[i].name()] = fuzzify(point[i], inputs_[i]);
            bool fired = false;
            for (const auto& rule : rules_) {
                double strength = 1.0;
                for (const auto& [var, term] : rule.antecedents)
                    strength = std::min(strength, degrees[var][term]);
                if (strength > 0.0) {
                    fired = true;
                    break;
                }
            }
            if (!fired) return {inputs_.size() == 1 ? inputs_[0].name() : "<joint>", point};
            std::size_t axis = 0;
            while (axis < idx.size() && ++idx[axis] == grid_per_axis) idx[axis++] = 0;
            if (axis == idx.size()) break;
        }
        return {};
    }

    bool operator==(const RuleBase&) const = default;

private:
    std::vector<LinguisticVariable> inputs_;
    LinguisticVariable output_;
    std::vector<FuzzyRule> rules_;
};

// Mamdani inference: firing strength = min over antecedent degrees,
// consequents clipped at the firing strength, aggregation = pointwise max.
inline AggregateFuzzySet infer(const RuleBase& rulebase,
                               const std::map<std::string, FuzzifiedValue>& fuzzified_inputs) {
    std::vector<AggregateFuzzySet::ClippedTerm> parts;
    for (const auto& rule : rulebase.rules()) {
        double strength = 1.0;
        for (const auto& [var, term] : rule.antecedents) {
            auto vit = fuzzified_inputs.find(var);
            if (vit == fuzzified_inputs.end())
                throw contract_error("no fuzzified degrees supplied for variable '" + var + "'");
            auto tit = vit->second.find(term);
            if (tit == vit->second.end())
                throw contract_error("no degree supplied for term '" + var + "." + term + "'");
            strength = std::min(strength, tit->second);
        }
        if (strength > 0.0)
            parts.push_back({*rulebase.output().find_term(rule.consequent_term), strength});
    }
    if (parts.empty())
        throw empty_inference_error("no rule fired with strength > 0");
    return AggregateFuzzySet(std::move(parts));
}

// Center-of-gravity by midpoint-rule integration with `resolution` uniform
// samples over [0,1].
inline double defuzzify(const AggregateFuzzySet& aggregate, int resolution = 1001) {
    if (resolution < 1) throw input_error("defuzzify resolution must be >= 1");
    double area = 0.0, moment = 0.0;
    const double step = 1.0 / resolution;
    for (int i = 0; i < resolution; ++i) {
        double x = (i + 0.5) * step;
        double y = aggregate.evaluate(x);
        area += y;
        moment += y * x;
    }
    if (area <= 0.0)
        throw empty_inference_error("aggregate fuzzy set has zero area");
    return moment / area;
}

// The default base: one input "uncertainty-level" and output "certainty",
// both with peaks at 0.17 / 0.5 / 0.83. Boundary terms are shoulder
// trapezoids so coverage holds at 0 and 1. Rules are the monotone map
// Low -> Good, Medium -> Fair, High -> Poor.
inline RuleBase default_rule_base() {
    auto make_terms = [](const std::string& low, const std::string& mid, const std::string& high) {
        return std::vector<std::pair<std::string, MembershipFunction>>{
            {low, MembershipFunction::trapezoidal(0.0, 0.0, 0.17, 0.5)},
            {mid, MembershipFunction::triangular(0.17, 0.5, 0.83)},
            {high, MembershipFunction::trapezoidal(0.5, 0.83, 1.0, 1.0)},
        };
    };
    LinguisticVariable input("uncertainty-level", 0.0, 1.0, make_terms("Low", "Medium", "High"));
    LinguisticVariable output("certainty", 0.0, 1.0, make_terms("Poor", "Fair", "Good"));
    std::vector<FuzzyRule> rules{
        {{{"uncertainty-level", "Low"}}, "Good"},
        {{{"uncertainty-level", "Medium"}}, "Fair"},
        {{{"uncertainty-level", "High"}}, "Poor"},
    };
    return RuleBase({input}, output, std::move(rules));
}

struct EpistemicResult {
    double certainty = 0.5;
    bool fallback = false; // true when inference was empty and 0.5 was substituted
};

// Full pipeline for one qualitative label: the label's term is represented
// by its centroid, fuzzified, run through the rules, and defuzzified into a
// certainty score in [0,1] (1 = minimal uncertainty). An empty inference
// falls back to 0.5, maximal ignorance.
inline EpistemicResult quantify_epistemic(const Observation& observation,
                                          const RuleBase& rulebase, int resolution = 1001) {
    if (observation.is_quantitative())
        throw contract_error("quantify_epistemic needs a qualitative observation");
    if (rulebase.inputs().size() != 1)
        throw contract_error("qualitative pipeline requires a single-input rule base");
    const auto& variable = rulebase.inputs().front();
    const std::string& term = observation.label().term;
    const auto* mf = variable.find_term(term);
    if (!mf)
        throw taxonomy_error("term '" + term + "' unknown to variable '" + variable.name() + "'");
    double representative = mf->centroid();
    std::map<std::string, FuzzifiedValue> degrees{{variable.name(), fuzzify(representative, variable)}};
    try {
        return {defuzzify(infer(rulebase, degrees), resolution), false};
    } catch (const empty_inference_error&) {
        return {0.5, true};
    }
}

} // namespace trustnet
