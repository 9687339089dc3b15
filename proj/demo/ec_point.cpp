// SPDX-License-Identifier: Apache-2.0
//
// nfec - effective capacity analysis for joint near-field/far-field links
// Copyright (C) 2026 The nfec authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// Effective capacity at the default operating point for a few QoS
// exponents, next to a short Monte Carlo run of the same link.

#include <cstdio>

#include "nfec/nfec.hpp"

int main() {
    const nfec::SystemParams p = nfec::validate(nfec::default_params());
    std::printf("d_F = %.4f m, Pr(near field) = %.5f\n", nfec::fraunhofer_distance(p), nfec::near_field_prior(p));

    nfec::McConfig mc;
    mc.n_samples = 200'000;
    for (double theta : {1e-3, 1e-2, 1e-1, 1.0}) {
        const nfec::EcResult r = nfec::effective_capacity(theta, p);
        const nfec::McEstimate sim = nfec::estimate_ec(p, theta, mc);
        std::printf("theta = %-6g EC = %.6f  (MC %.6f +- %.6f)  outage = %.5f\n", theta, r.ec_bits_per_use, sim.value,
                    sim.std_err, r.diagnostics.outage_probability);
    }
    std::printf("mean service = %.6f bits/use\n", nfec::mean_service_rate(p));
    return 0;
}
