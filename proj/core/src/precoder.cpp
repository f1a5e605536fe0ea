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

#include "rsrelay/precoder.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace rsrelay
{

arma::cx_mat zf_precoders(const arma::cx_mat &estimate)
{
    if (estimate.n_cols == 0)
        return arma::cx_mat(estimate.n_rows, 0);

    if (estimate.n_rows < estimate.n_cols)
        throw std::runtime_error("zf_precoders: more streams than antennas, cannot zero-force");

    // gram = estimate^H * estimate must be invertible for the nulls to
    // exist; rounding can make an exactly singular gram "invertible" with
    // huge entries, so reject on conditioning rather than LU failure alone
    arma::cx_mat gram = estimate.t() * estimate;
    arma::cx_mat gram_inv;
    if (arma::rcond(gram) < 1e3 * arma::datum::eps || !arma::inv(gram_inv, gram))
        throw std::runtime_error("zf_precoders: channel estimate is rank deficient");

    arma::cx_mat p = estimate * gram_inv;
    for (arma::uword c = 0; c < p.n_cols; ++c)
    {
        double nrm = arma::norm(p.col(c));
        if (!(nrm > 0.0) || !std::isfinite(nrm))
            throw std::runtime_error("zf_precoders: channel estimate is rank deficient");
        p.col(c) /= nrm;
    }
    return p;
}

arma::cx_vec common_precoder(const arma::cx_mat &estimate)
{
    if (estimate.n_cols == 0)
        return arma::cx_vec();
    if (estimate.n_rows == 0)
        throw std::domain_error("common_precoder: estimate has no rows");

    arma::cx_mat u;
    arma::vec s;
    arma::cx_mat v;
    if (!arma::svd_econ(u, s, v, estimate, "left") || s.n_elem == 0 || !(s(0) > 0.0))
        throw std::domain_error("common_precoder: estimate has no usable direction");

    arma::cx_vec dir = u.col(0);

    // anchor the arbitrary SVD phase: rotate the first non-negligible entry
    // onto the positive real axis
    for (arma::uword i = 0; i < dir.n_elem; ++i)
    {
        double mag = std::abs(dir(i));
        if (mag > 1e-9)
        {
            dir *= std::conj(dir(i)) / mag;
            break;
        }
    }
    return dir;
}

PrecoderSet build_precoders(const ChannelRealization &realization, const SystemConfig &config)
{
    const arma::uword l = config.n_relay_users;

    // private stack: one column per first-phase stream, BU links first, then
    // the relay-antenna columns carrying the forwarded streams. The common
    // precoder points at the BUs alone; the relay is expected to decode the
    // common stream without being aimed at.
    arma::cx_mat stack = realization.h_bs_users_est;
    if (l > 0)
        stack = arma::join_rows(stack, realization.h_bs_relay_est.cols(0, l - 1));

    PrecoderSet out;
    out.bs_common = common_precoder(realization.h_bs_users_est);
    out.bs_private = zf_precoders(stack);
    out.relay_common = common_precoder(realization.h_relay_rus_est);
    out.relay_private = zf_precoders(realization.h_relay_rus_est);
    return out;
}

} // namespace rsrelay
