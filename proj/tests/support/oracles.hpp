#pragma once

// Brute-force reference implementations used to cross-check the search
// paths. Written independently of the library code they check.

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <numeric>
#include <string>
#include <tuple>
#include <vector>

#include "golib/schema.hpp"

namespace golib::testing {

/// Straight-line chord between two points on the sphere, converted to the
/// arc it subtends.
inline double chord_distance_km(double lat1, double lon1, double lat2, double lon2) {
    constexpr double kPi = 3.14159265358979323846;
    auto point = [](double lat, double lon) {
        const double p = lat * kPi / 180.0, l = lon * kPi / 180.0;
        return std::array<double, 3>{std::cos(p) * std::cos(l), std::cos(p) * std::sin(l), std::sin(p)};
    };
    const auto a = point(lat1, lon1), b = point(lat2, lon2);
    double sq = 0;
    for (int i = 0; i < 3; ++i) sq += (a[i] - b[i]) * (a[i] - b[i]);
    return 2.0 * 6371.0 * std::asin(std::min(1.0, std::sqrt(sq) / 2.0));
}

inline std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

inline bool contains_ci(const std::string& hay, const std::string& needle) {
    return lower(hay).find(lower(needle)) != std::string::npos;
}

/// Unrated last, mean descending (equal means detected as equal reduced
/// fractions), then display name, then id.
inline bool oracle_book_precedes(const BookProfile& a, const BookProfile& b) {
    const bool ra = a.review_count > 0, rb = b.review_count > 0;
    if (ra != rb) return ra;
    if (ra) {
        const auto ga = std::gcd(a.rating_sum, a.review_count), gb = std::gcd(b.rating_sum, b.review_count);
        const bool same = a.rating_sum / ga == b.rating_sum / gb && a.review_count / ga == b.review_count / gb;
        if (!same) return *a.rating_mean() > *b.rating_mean();
    }
    return std::tie(a.display_name, a.account_id) < std::tie(b.display_name, b.account_id);
}

inline bool oracle_event_precedes(const Event& a, const Event& b) {
    return std::tie(a.starts_at, a.id) < std::tie(b.starts_at, b.id);
}

template <typename T, typename F>
std::vector<std::string> ids_of(const std::vector<T>& items, F id) {
    std::vector<std::string> out;
    out.reserve(items.size());
    for (const auto& item : items) out.push_back(id(item));
    return out;
}

}  // namespace golib::testing
