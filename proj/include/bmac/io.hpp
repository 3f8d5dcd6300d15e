#ifndef BMAC_IO_HPP
#define BMAC_IO_HPP

#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bmac/coherent.hpp"
#include "bmac/common.hpp"
#include "bmac/discrete_mac.hpp"
#include "bmac/linalg.hpp"

namespace bmac {

// All numeric output goes through this: 12 significant digits, locale-free.
inline std::string format_sig(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

// Minimal RFC-4180 writer: header row, quoted fields only when needed,
// LF line endings, UTF-8 passthrough.
class CsvWriter {
  public:
    explicit CsvWriter(std::ostream& os) : os_(os) {}

    void row(const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) os_ << ',';
            os_ << quote(fields[i]);
        }
        os_ << '\n';
    }

  private:
    static std::string quote(const std::string& f) {
        if (f.find_first_of(",\"\n\r") == std::string::npos) return f;
        std::string out = "\"";
        for (char c : f) {
            if (c == '"') out += '"';
            out += c;
        }
        out += '"';
        return out;
    }
    std::ostream& os_;
};

// Complex matrices serialize as [[ [re,im], ... ], ...] (row-major).
inline nlohmann::json matrix_to_json(const Matrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            row.push_back({m(i, j).real(), m(i, j).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace coherent {

inline void to_json(nlohmann::json& j, const CodebookPair& cb) {
    auto book = [](const std::vector<Codeword>& words) {
        nlohmann::json out = nlohmann::json::array();
        for (const auto& cw : words) {
            nlohmann::json w = nlohmann::json::array();
            for (const cplx& a : cw)
                w.push_back({{"re", a.real()}, {"im", a.imag()}});
            out.push_back(std::move(w));
        }
        return out;
    };
    j = {{"n", cb.n},
         {"sender_a", book(cb.sender_a)},
         {"sender_b", book(cb.sender_b)}};
}

inline void from_json(const nlohmann::json& j, CodebookPair& cb) {
    auto book = [](const nlohmann::json& arr) {
        std::vector<Codeword> words;
        for (const auto& w : arr) {
            Codeword cw;
            for (const auto& a : w)
                cw.emplace_back(a.at("re").get<double>(),
                                a.at("im").get<double>());
            words.push_back(std::move(cw));
        }
        return words;
    };
    cb.n = j.at("n").get<int>();
    cb.sender_a = book(j.at("sender_a"));
    cb.sender_b = book(j.at("sender_b"));
    cb.validate();
}

}  // namespace coherent

namespace dmac {

// Schema: {"dx":..,"dy":..,"d":..,"phi":[[[ [re,im], ... ], ...], ...]}
// with phi indexed [x][y][component].
inline void to_json(nlohmann::json& j, const PureStateMAC& mac) {
    nlohmann::json phi = nlohmann::json::array();
    for (int x = 0; x < mac.dx; ++x) {
        nlohmann::json row = nlohmann::json::array();
        for (int y = 0; y < mac.dy; ++y) {
            nlohmann::json comps = nlohmann::json::array();
            const Vector& v = mac.state(x, y);
            for (Eigen::Index c = 0; c < v.size(); ++c)
                comps.push_back({v[c].real(), v[c].imag()});
            row.push_back(std::move(comps));
        }
        phi.push_back(std::move(row));
    }
    j = {{"dx", mac.dx}, {"dy", mac.dy}, {"d", mac.d}, {"phi", phi}};
}

inline void from_json(const nlohmann::json& j, PureStateMAC& mac) {
    mac.dx = j.at("dx").get<int>();
    mac.dy = j.at("dy").get<int>();
    mac.d = j.at("d").get<int>();
    const auto& phi = j.at("phi");
    mac.phi.clear();
    mac.phi.reserve(static_cast<std::size_t>(mac.dx) * mac.dy);
    for (int x = 0; x < mac.dx; ++x)
        for (int y = 0; y < mac.dy; ++y) {
            const auto& comps = phi.at(x).at(y);
            Vector v(comps.size());
            for (std::size_t c = 0; c < comps.size(); ++c)
                v[static_cast<Eigen::Index>(c)] =
                    cplx(comps[c].at(0).get<double>(),
                         comps[c].at(1).get<double>());
            mac.phi.push_back(std::move(v));
        }
    mac.validate();
}

}  // namespace dmac

}  // namespace bmac

#endif
