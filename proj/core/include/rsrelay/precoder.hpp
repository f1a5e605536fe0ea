// SPDX-License-Identifier: Apache-2.0
//
// rsrelay - link-level simulation and power allocation for rate-splitting
// multiple access in decode-and-forward relay networks
// Copyright (C) 2026 the rsrelay contributors
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

#ifndef rsrelay_precoder_H
#define rsrelay_precoder_H

#include "rsrelay/channel.hpp"

#include <armadillo>

namespace rsrelay
{

// Zero-forcing private precoders for a channel estimate with one column per
// stream: the pseudo-inverse of estimate^H, columns scaled to unit norm, so
// estimate.col(j)^H * out.col(i) vanishes for i != j. Throws
// std::runtime_error when the estimate is rank deficient. An estimate with
// zero columns passes through empty.
arma::cx_mat zf_precoders(const arma::cx_mat &estimate);

// Common-stream precoder: dominant left singular vector of the estimate,
// i.e. the direction best aligned with all served users at once. The phase
// is anchored (first entry of non-negligible magnitude made real positive)
// so results are reproducible across LAPACK builds. Throws std::domain_error
// on an estimate with zero rows or all-zero entries; an estimate with zero
// columns yields an empty vector.
arma::cx_vec common_precoder(const arma::cx_mat &estimate);

// Everything the two transmitters precode with during one realization
struct PrecoderSet
{
    arma::cx_vec bs_common;     // N
    arma::cx_mat bs_private;    // N x (K + L), BU streams then relay streams
    arma::cx_vec relay_common;  // M (empty when L = 0)
    arma::cx_mat relay_private; // M x L
};

// Builds all precoders from the estimated links of one realization. The
// base station stacks the BU estimates with the first L columns of the
// relay estimate (one forwarded stream per relay user) and zero-forces the
// stack, while its common precoder is aimed at the BU estimates alone; the
// relay zero-forces its own user estimates. The second phase reuses the
// first-phase BU columns unchanged.
PrecoderSet build_precoders(const ChannelRealization &realization, const SystemConfig &config);

} // namespace rsrelay

#endif
