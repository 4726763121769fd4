// SPDX-License-Identifier: Apache-2.0
//
// risbf - joint active/passive beamforming for RIS-aided MIMO links
// Copyright (C) 2026 The risbf authors
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

#ifndef RISBF_INTERFERENCE_HPP
#define RISBF_INTERFERENCE_HPP

#include "risbf/error_model.hpp"
#include "risbf/types.hpp"

#include <cstdint>

namespace risbf
{
    enum class CovarianceVariant
    {
        Design,    // what the optimizer can compute from estimates alone
        Evaluation // includes the model-mismatch interference
    };

    // Interference-plus-noise covariance at the Rx, kept as separate addends.
    // `mismatch` is zero for the design variant, `cross` is zero for the evaluation variant.
    struct NoiseCovariance
    {
        CovarianceVariant variant = CovarianceVariant::Design;
        CMatrix mismatch; // dH_M W W^H dH_M^H
        CMatrix delta_r;  // sigma_R^2 tr(G W W^H G^H) I
        CMatrix delta_g;  // sigma_G^2 tr(W W^H) R R^H
        CMatrix cross;    // N_R sigma_G^2 sigma_R^2 tr(W W^H) I
        CMatrix thermal;  // sigma^2 I

        CMatrix total() const { return mismatch + delta_r + delta_g + cross + thermal; }
    };

    // E{X Z X^H} = X_hat Z X_hat^H + variance * tr(Z R_m^T) R_n
    // for X = X_hat + sqrt(variance) R_n^{1/2} E (R_m^T)^{1/2}, E with i.i.d. CN(0, 1) entries.
    CMatrix lemma1_expectation(const CMatrix &x_hat, const CMatrix &z, const CMatrix &r_n, const CMatrix &r_m,
                               double variance);

    // diag(phi) must have unit-modulus entries (1e-9 tolerance).
    NoiseCovariance sigma_design(const ChannelSet &cs, const CMatrix &w, const CVector &phi, double noise_power);
    NoiseCovariance sigma_eval(const ChannelSet &cs, const CMatrix &w, const CVector &phi, double noise_power);

    // Sample covariance of n = (dH + dH_M) W s + n_th over `draws` realisations of the
    // estimation errors, the symbols s ~ CN(0, I) and the thermal noise. With `exact`
    // the second-order products dR Phi dG and dR Phi dM are kept.
    CMatrix empirical_covariance(const ChannelSet &cs, const CMatrix &w, const CVector &phi, double noise_power,
                                 std::size_t draws, std::uint64_t seed, bool exact);

    // Throws NumericalError if `m` is not Hermitian PSD within tolerance.
    void verify_hermitian_psd(const CMatrix &m, const char *what);
}

#endif
