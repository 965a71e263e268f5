#pragma once

// canonical report emission: json with sorted keys and all rationals as
// normalized "p/q" strings, or a deterministic markdown rendering of the
// same tree.  identical inputs and seeds give byte-identical output.

#include <json.hpp>

#include <sstream>
#include <string>

#include "surf/lattice.hpp"
#include "surf/rational.hpp"

namespace surf {

using Json = nlohmann::json;

inline Json rat_json(const Rat& v) { return Json(rat_str(v)); }

inline Json class_json(const DivisorClass& d) {
    Json a = Json::array();
    for (const auto& v : d.c) a.push_back(rat_str(v));
    return a;
}

namespace detail {

inline std::string md_scalar(const Json& j) {
    if (j.is_string()) return j.get<std::string>();
    return j.dump();
}

inline bool md_flat(const Json& j) {
    if (!j.is_array()) return false;
    for (const auto& e : j)
        if (e.is_object() || e.is_array()) return false;
    return true;
}

inline void md_node(std::ostringstream& os, const Json& j, int indent) {
    std::string pad(static_cast<size_t>(2 * indent), ' ');
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (it.value().is_object() || (it.value().is_array() && !md_flat(it.value()))) {
                os << pad << "- " << it.key() << ":\n";
                md_node(os, it.value(), indent + 1);
            } else if (it.value().is_array()) {
                os << pad << "- " << it.key() << ": [";
                bool first = true;
                for (const auto& e : it.value()) {
                    os << (first ? "" : ", ") << md_scalar(e);
                    first = false;
                }
                os << "]\n";
            } else {
                os << pad << "- " << it.key() << ": " << md_scalar(it.value()) << "\n";
            }
        }
    } else if (j.is_array()) {
        int i = 0;
        for (const auto& e : j) {
            if (e.is_object() || e.is_array()) {
                os << pad << "- [" << i << "]\n";
                md_node(os, e, indent + 1);
            } else {
                os << pad << "- " << md_scalar(e) << "\n";
            }
            ++i;
        }
    } else {
        os << pad << md_scalar(j) << "\n";
    }
}

}  // namespace detail

inline std::string render_report(const Json& j, bool markdown) {
    if (!markdown) return j.dump(2) + "\n";
    std::ostringstream os;
    if (j.is_object() && j.contains("command") && j["command"].is_string())
        os << "# " << j["command"].get<std::string>() << "\n\n";
    detail::md_node(os, j, 0);
    return os.str();
}

}  // namespace surf
