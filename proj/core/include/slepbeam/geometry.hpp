// SPDX-License-Identifier: Apache-2.0
//
// slepbeam: broadband array beamforming via Slepian subspace embeddings
// Copyright (C) 2026 the slepbeam authors
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

#ifndef SLEPBEAM_GEOMETRY_HPP
#define SLEPBEAM_GEOMETRY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "slepbeam/types.hpp"

namespace slepbeam::geometry
{
    enum class ArrayKind
    {
        ula,
        upa,
        circular,
        random_linear,
        custom
    };

    std::string to_string(ArrayKind kind);
    ArrayKind array_kind_from_string(const std::string &name);

    // Plane-wave arrival direction. unit_normal() returns
    //   u = [cos(az)cos(el), sin(az)cos(el), sin(el)]
    // For a ULA on the x axis with el = 0, az is the angle measured from the
    // array axis: az = pi/2 is broadside (zero effective aperture).
    struct DirectionOfArrival
    {
        double azimuth_rad = 0.0;
        double elevation_rad = 0.0;

        Vec3 unit_normal() const;
    };

    // Element positions in meters plus the carrier the spacing was tuned to.
    // Immutable after construction; all operations on it are pure.
    struct ArrayGeometry
    {
        std::vector<Vec3> elements; // positions in meters
        double carrier_hz = 0.0;    // f_c
        ArrayKind kind = ArrayKind::custom;

        std::size_t size() const { return elements.size(); }
        Vec3 centroid() const;
        // half-wavelength element spacing c/(2 f_c)
        double nominal_spacing_m() const { return speed_of_light / (2.0 * carrier_hz); }
    };

    // Per-element delays relative to the array centroid, in seconds, and the
    // same delays in half-carrier-period units (tau * 2 f_c).
    struct DelayProfile
    {
        VecR delays_s;
        VecR normalized_lags;
    };

    // M collinear elements on the x axis, spacing c/(2 f_c), centered at the origin.
    ArrayGeometry build_ula(std::size_t m, double carrier_hz);

    // M x N planar grid in the x-y plane, spacing c/(2 f_c), centered at the origin.
    ArrayGeometry build_upa(std::size_t m, std::size_t n, double carrier_hz);

    // M elements equally spaced on a circle in the z = 0 plane whose
    // circumference is M * c/(2 f_c).
    ArrayGeometry build_circular(std::size_t m, double carrier_hz);

    // M elements i.i.d. uniform on [0, M*spacing] along the x axis, sorted
    // ascending. Deterministic for a given seed.
    ArrayGeometry build_random_linear(std::size_t m, double spacing_m, std::uint64_t seed);

    ArrayGeometry custom_geometry(std::vector<Vec3> elements, double carrier_hz);

    // tau_m = (z_m - centroid) . u / c, so sum(tau) = 0.
    DelayProfile delays(const ArrayGeometry &g, const DirectionOfArrival &doa);

    // A = | max_m z_m.u - min_m z_m.u |, the depth of the array seen from the
    // arrival direction. Invariant under rigid translation and u -> -u.
    double effective_aperture(const ArrayGeometry &g, const DirectionOfArrival &doa);

    // max(ceil(2 * omega * A / c), 1): degrees of freedom of one snapshot.
    std::size_t subspace_dimension(const ArrayGeometry &g, const DirectionOfArrival &doa, double omega_hz);

    // Closed forms. These use the element counts M (and N) as-is even though
    // the physical extent is (M-1) spacings, so they can differ from
    // subspace_dimension() by +-1.
    std::size_t ula_subspace_dimension(std::size_t m, double carrier_hz, double omega_hz, double cos_theta);
    std::size_t upa_subspace_dimension(std::size_t m, std::size_t n, double carrier_hz, double omega_hz,
                                       double cos_theta);

    // Separable 2-D product bound: always >= the non-separable dimension.
    std::size_t separable_dimension(std::size_t m, std::size_t n, double carrier_hz, double omega_hz,
                                    const DirectionOfArrival &doa);

    // JSON round trip: {"kind": ..., "carrier_hz": ..., "elements": [[x,y,z],...]},
    // positions written with 17 significant digits.
    std::string to_json(const ArrayGeometry &g);
    ArrayGeometry geometry_from_json(const std::string &json_text);

} // namespace slepbeam::geometry

#endif
