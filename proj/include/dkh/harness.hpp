/*
 * Copyright 2026 the dkh authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef DKH_HARNESS_HPP
#define DKH_HARNESS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "dkh/proof.hpp"
#include "dkh/semantics.hpp"

namespace dkh {

/// SplitMix64. Fully specified, so seeded runs are reproducible across
/// platforms and thread counts.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next();
    int uniform(int lo, int hi);  // inclusive bounds
    bool chance(double p);

private:
    std::uint64_t state_;
};

/// Stable per-stream, per-index seed derivation; workers never share
/// generator state.
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream, std::uint64_t index);

struct IntRange {
    int lo;
    int hi;
};

struct GenParams {
    std::uint64_t seed = 1;
    IntRange state_count{2, 6};
    IntRange agent_count{1, 3};
    IntRange atoms_per_group{0, 2};
    IntRange props{1, 3};
    double transition_density = 0.25;
    IntRange formula_depth{1, 3};
    // Multi-agent owner groups stay rare to keep closures small.
    double multi_owner_prob = 0.2;

    void validate() const;  // throws std::invalid_argument
    nlohmann::json to_json() const;
};

/// Which loop implementation to run. Parallel uses OpenMP when compiled in
/// and degrades to the serial loop otherwise; both produce identical output.
enum class Execution { Serial, Parallel };

/// Deterministic in p.seed; the result always satisfies the Model
/// invariants.
Model random_model(const GenParams& p);

/// Random core-connective formula over the given propositions and agents.
Formula random_formula(Rng& rng, const std::vector<std::string>& props, int agent_count,
                       int depth);

/// Metavariable slots used when instantiating an axiom schema.
struct SchemaArgs {
    Formula phi;
    Formula psi;
    Group g;
    Group h;  // must contain g for the monotonicity schemas
};

/// Builds the concrete instance of an SDKH axiom schema. Groups the schema
/// fixes to the empty group are filled in regardless of args.
Formula axiom_instance(Rule axiom, const SchemaArgs& args);

/// The 14 axiom schemas in table order.
const std::vector<Rule>& sdkh_axioms();

struct SweepViolation {
    std::uint64_t seed;
    std::string state;
    std::string formula;

    bool operator<(const SweepViolation& other) const;
};

struct SweepReport {
    GenParams params;
    int models_tested = 0;
    int models_skipped = 0;  // enumeration cap exceeded
    std::int64_t instances_tested = 0;
    std::vector<SweepViolation> violations;

    bool passed() const { return violations.empty(); }
    nlohmann::json to_json() const;
};

/// For each of `models` random models, instantiates every axiom schema
/// `instances_per_model` times (side conditions respected) and checks the
/// instance holds everywhere; also checks MP/NECK validity preservation and
/// the K_{} / Kh_{} collapse. Models are independent, so the parallel path
/// splits them across threads; reports are identical for both paths.
SweepReport soundness_sweep(const GenParams& p, int models, int instances_per_model,
                            Execution exec = Execution::Parallel);

struct CounterExample {
    std::uint64_t sample_index;
    std::uint64_t seed;  // replay: GenParams.seed for random_model
    Model model;
    std::string state;
    Formula instance;

    nlohmann::json to_json() const;
};

/// Resolves "coop", "khconj" or an axiom name to a template whose
/// metavariables are the reserved atoms `phi` and `psi`.
Formula named_template(const std::string& name);

/// Substitutes the reserved atoms `phi`/`psi`.
Formula substitute_metavars(const Formula& tpl, const Formula& phi, const Formula& psi);

/// Random search for a model and state falsifying the template. The hit
/// with the lowest sample index is returned (so serial and parallel agree)
/// after being re-verified by eval. nullopt when the budget runs out, which
/// is not a refutation.
std::optional<CounterExample> find_countermodel(const Formula& tpl, const GenParams& p,
                                                int budget,
                                                Execution exec = Execution::Parallel);

}  // namespace dkh

#endif  // DKH_HARNESS_HPP
