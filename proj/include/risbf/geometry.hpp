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

#ifndef RISBF_GEOMETRY_HPP
#define RISBF_GEOMETRY_HPP

#include "risbf/types.hpp"

#include <cstddef>
#include <vector>

namespace risbf
{
    enum class ArrayKind
    {
        ULA,
        UPA
    };

    // Antenna array layout. A ULA uses `count_y` elements along `axis_y`; a UPA
    // additionally uses `count_z` elements along `axis_z`. Elements are centred on
    // `center`. UPA element index is iy * count_z + iz (y-major, matching kron(y, z)).
    struct ArraySpec
    {
        ArrayKind kind = ArrayKind::ULA;
        std::size_t count_y = 1;
        std::size_t count_z = 1;
        double spacing = 0.005;
        Position3D center = Position3D::Zero();
        Eigen::Vector3d axis_y = Eigen::Vector3d::UnitY();
        Eigen::Vector3d axis_z = Eigen::Vector3d::UnitZ();

        std::size_t size() const { return count_y * count_z; }

        static ArraySpec ula(std::size_t n, double spacing, const Position3D &center,
                             const Eigen::Vector3d &axis = Eigen::Vector3d::UnitY());
        static ArraySpec upa(std::size_t ny, std::size_t nz, double spacing, const Position3D &center,
                             const Eigen::Vector3d &axis_y = Eigen::Vector3d::UnitY(),
                             const Eigen::Vector3d &axis_z = Eigen::Vector3d::UnitZ());

        void validate(const char *name) const;

        // 3 x size() matrix of element coordinates.
        Eigen::Matrix3Xd element_positions() const;

        // Largest distance between two elements, (N-1)d along each axis combined.
        double aperture() const;
    };

    // Angles that reproduce the planar-wave phase progression across an array.
    // `ula` satisfies sin(ula) = u . axis; (`az`, `el`) satisfy
    // sin(az)cos(el) = u . axis_y and sin(az)sin(el) = u . axis_z, so the
    // steering-vector phase steps are exactly the direction cosines of u.
    struct DirectionAngles
    {
        double ula = 0.0;
        double az = 0.0;
        double el = 0.0;
    };

    DirectionAngles ula_angle(const Eigen::Vector3d &unit_dir, const ArraySpec &array);
    DirectionAngles upa_angles(const Eigen::Vector3d &unit_dir, const ArraySpec &array);

    // A K x K partition of the RIS. Horizontal strip i holds y-block i over all z;
    // vertical strip j holds z-block j over all y.
    struct Subsurface
    {
        Position3D centroid = Position3D::Zero();
        double distance = 0.0;   // Tx array centre to centroid
        DirectionAngles angles;  // direction Tx -> centroid, in RIS coordinates
    };

    struct RisPartition
    {
        std::size_t k = 1;
        std::vector<Subsurface> horizontal; // size K
        std::vector<Subsurface> vertical;   // size K
        std::vector<Subsurface> blocks;     // size K*K, index i*K + j
    };

    // Centroids are placed analytically, so K = 1 reproduces the array centre exactly.
    RisPartition partition_ris(const ArraySpec &ris, const Position3D &tx_center, std::size_t k);

    struct SceneGeometry
    {
        ArraySpec tx;
        ArraySpec ris;
        ArraySpec rx;
        std::size_t partitions = 1;

        Eigen::Matrix3Xd tx_elements;
        Eigen::Matrix3Xd ris_elements;
        Eigen::Matrix3Xd rx_elements;

        // N_R x N_Tx element-pair distances.
        Eigen::MatrixXd tx_ris_distance;

        double d_tr = 0.0; // Tx centre to RIS centre
        double d_rr = 0.0; // RIS centre to Rx centre

        double theta_tx = 0.0;   // AoD at the Tx towards the RIS centre
        double psi_ris_az = 0.0; // AoA at the RIS centre
        double psi_ris_el = 0.0;
        double phi_rx_los = 0.0;     // LoS AoA at the Rx
        double phi_ris_los_az = 0.0; // LoS AoD at the RIS towards the Rx
        double phi_ris_los_el = 0.0;

        RisPartition partition;
    };

    struct SceneSpec
    {
        ArraySpec tx;
        ArraySpec ris;
        ArraySpec rx;
        std::size_t partitions = 1;
    };

    SceneGeometry build_scene(const SceneSpec &spec);

    // 2 D^2 / lambda.
    double rayleigh_distance(double aperture, double lambda);
}

#endif
