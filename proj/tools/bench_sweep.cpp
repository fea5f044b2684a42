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

// Benchmarks the OpenMP soundness sweep and countermodel search against
// their serial reference loops, and checks that both produce identical
// output.

#include <chrono>
#include <cstdio>
#include <cstring>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <nlohmann/json.hpp>

#include "dkh/harness.hpp"

using namespace dkh;

namespace {

double ms_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
}

}  // namespace

int main(int argc, char** argv) {
    int models = 2000;
    int instances = 3;
    std::uint64_t seed = 7;
    for (int i = 1; i + 1 < argc; i += 2) {
        if (!std::strcmp(argv[i], "--models"))
            models = std::atoi(argv[i + 1]);
        else if (!std::strcmp(argv[i], "--instances"))
            instances = std::atoi(argv[i + 1]);
        else if (!std::strcmp(argv[i], "--seed"))
            seed = std::strtoull(argv[i + 1], nullptr, 10);
    }

    GenParams params;
    params.seed = seed;

#ifdef _OPENMP
    int threads = omp_get_max_threads();
#else
    int threads = 1;
#endif
    std::printf("soundness sweep: %d models x 14 schemas x %d instances (seed %llu)\n", models,
                instances, static_cast<unsigned long long>(seed));

    auto t0 = std::chrono::steady_clock::now();
    SweepReport serial = soundness_sweep(params, models, instances, Execution::Serial);
    double serial_ms = ms_since(t0);

    t0 = std::chrono::steady_clock::now();
    SweepReport parallel = soundness_sweep(params, models, instances, Execution::Parallel);
    double parallel_ms = ms_since(t0);

    bool same = serial.to_json() == parallel.to_json();
    std::printf("  serial:    %9.1f ms\n", serial_ms);
    std::printf("  parallel:  %9.1f ms  (%d threads)\n", parallel_ms, threads);
    std::printf("  speedup:   %9.2fx\n", parallel_ms > 0 ? serial_ms / parallel_ms : 0.0);
    std::printf("  identical: %s\n", same ? "yes" : "NO");

    Formula coop = named_template("coop");
    int budget = 10000;
    std::printf("countermodel search: coop, budget %d\n", budget);

    t0 = std::chrono::steady_clock::now();
    auto hit_serial = find_countermodel(coop, params, budget, Execution::Serial);
    double counter_serial_ms = ms_since(t0);

    t0 = std::chrono::steady_clock::now();
    auto hit_parallel = find_countermodel(coop, params, budget, Execution::Parallel);
    double counter_parallel_ms = ms_since(t0);

    bool counter_same =
        hit_serial.has_value() == hit_parallel.has_value() &&
        (!hit_serial || hit_serial->to_json() == hit_parallel->to_json());
    std::printf("  serial:    %9.1f ms%s\n", counter_serial_ms,
                hit_serial ? "" : "  (no hit)");
    std::printf("  parallel:  %9.1f ms\n", counter_parallel_ms);
    std::printf("  identical: %s\n", counter_same ? "yes" : "NO");

    return (same && counter_same) ? 0 : 1;
}
