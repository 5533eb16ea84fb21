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

#include "slepbeam/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "slepbeam/rng.hpp"

#include <json.hpp>

namespace slepbeam::geometry
{

    std::string to_string(ArrayKind kind)
    {
        switch (kind)
        {
        case ArrayKind::ula:
            return "ula";
        case ArrayKind::upa:
            return "upa";
        case ArrayKind::circular:
            return "circular";
        case ArrayKind::random_linear:
            return "random_linear";
        case ArrayKind::custom:
            return "custom";
        }
        return "custom";
    }

    ArrayKind array_kind_from_string(const std::string &name)
    {
        if (name == "ula")
            return ArrayKind::ula;
        if (name == "upa")
            return ArrayKind::upa;
        if (name == "circular")
            return ArrayKind::circular;
        if (name == "random_linear")
            return ArrayKind::random_linear;
        if (name == "custom")
            return ArrayKind::custom;
        throw std::invalid_argument("unknown array kind: " + name);
    }

    Vec3 DirectionOfArrival::unit_normal() const
    {
        double ca = std::cos(azimuth_rad), sa = std::sin(azimuth_rad);
        double ce = std::cos(elevation_rad), se = std::sin(elevation_rad);
        return {ca * ce, sa * ce, se};
    }

    Vec3 ArrayGeometry::centroid() const
    {
        Vec3 c = Vec3::Zero();
        for (const auto &z : elements)
            c += z;
        return c / static_cast<double>(elements.size());
    }

    static void check_carrier(double carrier_hz)
    {
        if (!(carrier_hz > 0.0))
            throw std::invalid_argument("carrier frequency must be positive");
    }

    ArrayGeometry build_ula(std::size_t m, double carrier_hz)
    {
        if (m < 1)
            throw std::invalid_argument("ULA needs at least one element");
        check_carrier(carrier_hz);
        ArrayGeometry g;
        g.carrier_hz = carrier_hz;
        g.kind = ArrayKind::ula;
        double d = g.nominal_spacing_m();
        double x0 = -0.5 * static_cast<double>(m - 1) * d;
        g.elements.reserve(m);
        for (std::size_t i = 0; i < m; ++i)
            g.elements.push_back({x0 + static_cast<double>(i) * d, 0.0, 0.0});
        return g;
    }

    ArrayGeometry build_upa(std::size_t m, std::size_t n, double carrier_hz)
    {
        if (m < 1 || n < 1)
            throw std::invalid_argument("UPA dimensions must be nonzero");
        check_carrier(carrier_hz);
        ArrayGeometry g;
        g.carrier_hz = carrier_hz;
        g.kind = ArrayKind::upa;
        double d = g.nominal_spacing_m();
        double x0 = -0.5 * static_cast<double>(m - 1) * d;
        double y0 = -0.5 * static_cast<double>(n - 1) * d;
        g.elements.reserve(m * n);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j)
                g.elements.push_back({x0 + static_cast<double>(i) * d, y0 + static_cast<double>(j) * d, 0.0});
        return g;
    }

    ArrayGeometry build_circular(std::size_t m, double carrier_hz)
    {
        if (m < 2)
            throw std::invalid_argument("circular array needs at least two elements");
        check_carrier(carrier_hz);
        ArrayGeometry g;
        g.carrier_hz = carrier_hz;
        g.kind = ArrayKind::circular;
        double d = g.nominal_spacing_m();
        double radius = static_cast<double>(m) * d / (2.0 * pi);
        g.elements.reserve(m);
        for (std::size_t i = 0; i < m; ++i)
        {
            double phi = 2.0 * pi * static_cast<double>(i) / static_cast<double>(m);
            g.elements.push_back({radius * std::cos(phi), radius * std::sin(phi), 0.0});
        }
        return g;
    }

    ArrayGeometry build_random_linear(std::size_t m, double spacing_m, std::uint64_t seed)
    {
        if (m < 1)
            throw std::invalid_argument("random linear array needs at least one element");
        if (!(spacing_m > 0.0))
            throw std::invalid_argument("spacing must be positive");
        ArrayGeometry g;
        g.carrier_hz = speed_of_light / (2.0 * spacing_m); // carrier the spacing is tuned to
        g.kind = ArrayKind::random_linear;
        Rng rng(seed);
        std::uniform_real_distribution<double> dist(0.0, static_cast<double>(m) * spacing_m);
        std::vector<double> xs(m);
        for (auto &x : xs)
            x = dist(rng);
        std::sort(xs.begin(), xs.end());
        g.elements.reserve(m);
        for (double x : xs)
            g.elements.push_back({x, 0.0, 0.0});
        return g;
    }

    ArrayGeometry custom_geometry(std::vector<Vec3> elements, double carrier_hz)
    {
        if (elements.empty())
            throw std::invalid_argument("geometry needs at least one element");
        check_carrier(carrier_hz);
        for (const auto &z : elements)
            if (!z.allFinite())
                throw std::invalid_argument("element positions must be finite");
        ArrayGeometry g;
        g.elements = std::move(elements);
        g.carrier_hz = carrier_hz;
        g.kind = ArrayKind::custom;
        return g;
    }

    DelayProfile delays(const ArrayGeometry &g, const DirectionOfArrival &doa)
    {
        Vec3 u = doa.unit_normal();
        Vec3 c0 = g.centroid();
        const auto m = static_cast<Eigen::Index>(g.size());
        DelayProfile p;
        p.delays_s.resize(m);
        for (Eigen::Index i = 0; i < m; ++i)
            p.delays_s[i] = (g.elements[static_cast<std::size_t>(i)] - c0).dot(u) / speed_of_light;
        p.normalized_lags = 2.0 * g.carrier_hz * p.delays_s;
        return p;
    }

    double effective_aperture(const ArrayGeometry &g, const DirectionOfArrival &doa)
    {
        Vec3 u = doa.unit_normal();
        double lo = g.elements.front().dot(u), hi = lo;
        for (const auto &z : g.elements)
        {
            double t = z.dot(u);
            lo = std::min(lo, t);
            hi = std::max(hi, t);
        }
        return std::abs(hi - lo);
    }

    static std::size_t ceil_dim(double x)
    {
        return std::max<std::size_t>(static_cast<std::size_t>(std::ceil(x)), 1);
    }

    std::size_t subspace_dimension(const ArrayGeometry &g, const DirectionOfArrival &doa, double omega_hz)
    {
        if (omega_hz < 0.0)
            throw std::invalid_argument("bandwidth must be nonnegative");
        double a = effective_aperture(g, doa);
        return ceil_dim(2.0 * omega_hz * a / speed_of_light);
    }

    std::size_t ula_subspace_dimension(std::size_t m, double carrier_hz, double omega_hz, double cos_theta)
    {
        check_carrier(carrier_hz);
        return ceil_dim(omega_hz / carrier_hz * static_cast<double>(m) * std::abs(cos_theta));
    }

    std::size_t upa_subspace_dimension(std::size_t m, std::size_t n, double carrier_hz, double omega_hz,
                                       double cos_theta)
    {
        check_carrier(carrier_hz);
        double diag = std::sqrt(static_cast<double>(m) * static_cast<double>(m) +
                                static_cast<double>(n) * static_cast<double>(n));
        return ceil_dim(omega_hz / carrier_hz * diag * std::abs(cos_theta));
    }

    std::size_t separable_dimension(std::size_t m, std::size_t n, double carrier_hz, double omega_hz,
                                    const DirectionOfArrival &doa)
    {
        if (m < 1 || n < 1)
            throw std::invalid_argument("grid dimensions must be nonzero");
        check_carrier(carrier_hz);
        double cp = std::cos(doa.azimuth_rad), ct = std::cos(doa.elevation_rad), st = std::sin(doa.elevation_rad);
        double rows = static_cast<double>(n) * omega_hz / carrier_hz * std::abs(cp * ct);
        double cols = static_cast<double>(m) * omega_hz / carrier_hz * std::abs(cp * st);
        return ceil_dim(rows) * ceil_dim(cols);
    }

    std::string to_json(const ArrayGeometry &g)
    {
        nlohmann::ordered_json j;
        j["kind"] = to_string(g.kind);
        j["carrier_hz"] = g.carrier_hz;
        auto arr = nlohmann::ordered_json::array();
        char buf[3][32];
        for (const auto &z : g.elements)
        {
            for (int k = 0; k < 3; ++k)
                std::snprintf(buf[k], sizeof(buf[k]), "%.17g", z[k]);
            arr.push_back({std::stod(buf[0]), std::stod(buf[1]), std::stod(buf[2])});
        }
        j["elements"] = std::move(arr);
        return j.dump(2);
    }

    ArrayGeometry geometry_from_json(const std::string &json_text)
    {
        auto j = nlohmann::json::parse(json_text);
        ArrayGeometry g;
        g.kind = array_kind_from_string(j.at("kind").get<std::string>());
        g.carrier_hz = j.at("carrier_hz").get<double>();
        check_carrier(g.carrier_hz);
        for (const auto &e : j.at("elements"))
        {
            if (e.size() != 3)
                throw std::invalid_argument("element positions must be [x,y,z] triples");
            g.elements.push_back({e[0].get<double>(), e[1].get<double>(), e[2].get<double>()});
        }
        if (g.elements.empty())
            throw std::invalid_argument("geometry needs at least one element");
        return g;
    }

} // namespace slepbeam::geometry
