#pragma once

#include <cctype>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace poa {

// Resource limits for enumeration, grid searches and instance generation.
// Defaults can be overridden process-wide via the POA_LAB_CAPS environment
// variable, e.g. POA_LAB_CAPS="profiles=1e6,kcap=20000,ocap=2000".
struct Caps {
    std::int64_t max_profiles = 10'000'000;   // brute-force enumeration cap
    int k_cap = 10'000;                       // unweighted grid: congestion range
    int o_cap = 1'000;                        // unweighted grid: optimum-congestion range
    double x_max = 1e6;                       // bracket for the dual variable x
    std::int64_t max_resources = 20'000'000;  // generator size cap
    std::int64_t max_players = 20'000'000;
    std::int64_t max_e0 = 10'000'000;         // materialization cap for |E_0| (walk family)

    static Caps from_env() {
        Caps c;
        const char* raw = std::getenv("POA_LAB_CAPS");
        if (raw == nullptr) return c;
        std::string s(raw);
        std::size_t pos = 0;
        while (pos < s.size()) {
            std::size_t end = s.find(',', pos);
            if (end == std::string::npos) end = s.size();
            std::string item = s.substr(pos, end - pos);
            pos = end + 1;
            std::size_t eq = item.find('=');
            if (eq == std::string::npos) continue;
            std::string key = item.substr(0, eq);
            double val = std::strtod(item.c_str() + eq + 1, nullptr);
            if (key == "profiles") c.max_profiles = static_cast<std::int64_t>(val);
            else if (key == "kcap") c.k_cap = static_cast<int>(val);
            else if (key == "ocap") c.o_cap = static_cast<int>(val);
            else if (key == "xmax") c.x_max = val;
            else if (key == "resources") c.max_resources = static_cast<std::int64_t>(val);
            else if (key == "players") c.max_players = static_cast<std::int64_t>(val);
            else if (key == "e0") c.max_e0 = static_cast<std::int64_t>(val);
            else throw std::invalid_argument("POA_LAB_CAPS: unknown key '" + key + "'");
        }
        return c;
    }
};

// Thrown when an operation would exceed a configured cap.
class cap_exceeded : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace poa
