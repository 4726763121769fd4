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

#include "risbf/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace risbf
{
    ArraySpec ArraySpec::ula(std::size_t n, double spacing, const Position3D &center, const Eigen::Vector3d &axis)
    {
        ArraySpec a;
        a.kind = ArrayKind::ULA;
        a.count_y = n;
        a.count_z = 1;
        a.spacing = spacing;
        a.center = center;
        a.axis_y = axis;
        // any unit vector orthogonal to the axis
        Eigen::Vector3d helper = std::abs(axis.z()) < 0.9 ? Eigen::Vector3d::UnitZ() : Eigen::Vector3d::UnitX();
        a.axis_z = (helper - helper.dot(axis) * axis).normalized();
        return a;
    }

    ArraySpec ArraySpec::upa(std::size_t ny, std::size_t nz, double spacing, const Position3D &center,
                             const Eigen::Vector3d &axis_y, const Eigen::Vector3d &axis_z)
    {
        ArraySpec a;
        a.kind = ArrayKind::UPA;
        a.count_y = ny;
        a.count_z = nz;
        a.spacing = spacing;
        a.center = center;
        a.axis_y = axis_y;
        a.axis_z = axis_z;
        return a;
    }

    void ArraySpec::validate(const char *name) const
    {
        const std::string n(name);
        if (count_y == 0 || count_z == 0)
            throw ConfigError(n + ": element counts must be positive");
        if (kind == ArrayKind::ULA && count_z != 1)
            throw ConfigError(n + ": a ULA has a single row");
        if (!(spacing > 0.0) || !std::isfinite(spacing))
            throw ConfigError(n + ": spacing must be > 0");
        if (!center.allFinite())
            throw ConfigError(n + ": position must be finite");
        constexpr double tol = 1e-9;
        if (std::abs(axis_y.norm() - 1.0) > tol || std::abs(axis_z.norm() - 1.0) > tol ||
            std::abs(axis_y.dot(axis_z)) > tol)
            throw ConfigError(n + ": orientation axes must be orthonormal");
    }

    Eigen::Matrix3Xd ArraySpec::element_positions() const
    {
        Eigen::Matrix3Xd pos(3, size());
        const double oy = 0.5 * static_cast<double>(count_y - 1);
        const double oz = 0.5 * static_cast<double>(count_z - 1);
        for (std::size_t iy = 0; iy < count_y; ++iy)
            for (std::size_t iz = 0; iz < count_z; ++iz)
            {
                const double y = (static_cast<double>(iy) - oy) * spacing;
                const double z = (static_cast<double>(iz) - oz) * spacing;
                pos.col(static_cast<Eigen::Index>(iy * count_z + iz)) = center + y * axis_y + z * axis_z;
            }
        return pos;
    }

    double ArraySpec::aperture() const
    {
        const double ly = static_cast<double>(count_y - 1) * spacing;
        const double lz = static_cast<double>(count_z - 1) * spacing;
        return std::hypot(ly, lz);
    }

    DirectionAngles ula_angle(const Eigen::Vector3d &unit_dir, const ArraySpec &array)
    {
        DirectionAngles a;
        a.ula = std::asin(std::clamp(unit_dir.dot(array.axis_y), -1.0, 1.0));
        return a;
    }

    DirectionAngles upa_angles(const Eigen::Vector3d &unit_dir, const ArraySpec &array)
    {
        const double cy = unit_dir.dot(array.axis_y);
        const double cz = unit_dir.dot(array.axis_z);
        DirectionAngles a;
        a.az = std::asin(std::clamp(std::hypot(cy, cz), 0.0, 1.0));
        a.el = std::atan2(cz, cy);
        return a;
    }

    namespace
    {
        Subsurface make_subsurface(const Position3D &centroid, const ArraySpec &ris, const Position3D &tx_center)
        {
            Subsurface s;
            s.centroid = centroid;
            const Eigen::Vector3d v = centroid - tx_center;
            s.distance = v.norm();
            s.angles = upa_angles(v / s.distance, ris);
            return s;
        }

        // Offset of the centre of block `b` (of `size` elements) from the array centre.
        double block_offset(std::size_t b, std::size_t size, std::size_t total, double spacing)
        {
            const double first = static_cast<double>(b * size);
            return (first + 0.5 * static_cast<double>(size - 1) - 0.5 * static_cast<double>(total - 1)) * spacing;
        }
    }

    RisPartition partition_ris(const ArraySpec &ris, const Position3D &tx_center, std::size_t k)
    {
        if (k == 0)
            throw ConfigError("partitions K must be positive");
        if (ris.count_y % k != 0)
            throw ConfigError("N_Ry not divisible by K");
        if (ris.count_z % k != 0)
            throw ConfigError("N_Rz not divisible by K");
        const std::size_t sy = ris.count_y / k, sz = ris.count_z / k;
        RisPartition p;
        p.k = k;
        for (std::size_t i = 0; i < k; ++i)
        {
            const double oy = block_offset(i, sy, ris.count_y, ris.spacing);
            const double oz = block_offset(i, sz, ris.count_z, ris.spacing);
            p.horizontal.push_back(make_subsurface(ris.center + oy * ris.axis_y, ris, tx_center));
            p.vertical.push_back(make_subsurface(ris.center + oz * ris.axis_z, ris, tx_center));
        }
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j)
            {
                const double oy = block_offset(i, sy, ris.count_y, ris.spacing);
                const double oz = block_offset(j, sz, ris.count_z, ris.spacing);
                p.blocks.push_back(make_subsurface(ris.center + oy * ris.axis_y + oz * ris.axis_z, ris, tx_center));
            }
        return p;
    }

    SceneGeometry build_scene(const SceneSpec &spec)
    {
        spec.tx.validate("tx");
        spec.ris.validate("ris");
        spec.rx.validate("rx");
        const std::size_t K = spec.partitions;

        SceneGeometry g;
        g.tx = spec.tx;
        g.ris = spec.ris;
        g.rx = spec.rx;
        g.partitions = K;
        g.tx_elements = spec.tx.element_positions();
        g.ris_elements = spec.ris.element_positions();
        g.rx_elements = spec.rx.element_positions();

        const auto n_ris = g.ris_elements.cols();
        const auto n_tx = g.tx_elements.cols();
        g.tx_ris_distance.resize(n_ris, n_tx);
        for (Eigen::Index r = 0; r < n_ris; ++r)
            for (Eigen::Index t = 0; t < n_tx; ++t)
            {
                const double dist = (g.ris_elements.col(r) - g.tx_elements.col(t)).norm();
                if (!(dist > 0.0))
                    throw ConfigError("coincident elements between Tx and RIS");
                g.tx_ris_distance(r, t) = dist;
            }

        const Eigen::Vector3d tr = spec.ris.center - spec.tx.center;
        const Eigen::Vector3d rr = spec.rx.center - spec.ris.center;
        g.d_tr = tr.norm();
        g.d_rr = rr.norm();
        if (!(g.d_tr > 0.0) || !(g.d_rr > 0.0))
            throw ConfigError("coincident elements: node centres must be distinct");

        const Eigen::Vector3d u = tr / g.d_tr;
        const Eigen::Vector3d v = rr / g.d_rr;
        g.theta_tx = ula_angle(u, spec.tx).ula;
        const auto in = upa_angles(u, spec.ris);
        g.psi_ris_az = in.az;
        g.psi_ris_el = in.el;
        g.phi_rx_los = ula_angle(v, spec.rx).ula;
        const auto out = upa_angles(v, spec.ris);
        g.phi_ris_los_az = out.az;
        g.phi_ris_los_el = out.el;

        g.partition = partition_ris(spec.ris, spec.tx.center, K);
        return g;
    }

    double rayleigh_distance(double aperture, double lambda)
    {
        if (aperture < 0.0 || !(lambda > 0.0))
            throw ConfigError("rayleigh_distance: aperture must be >= 0 and lambda > 0");
        return 2.0 * aperture * aperture / lambda;
    }
}
