#include "fracident/csv.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace fracident {

std::string csv_number(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[40];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

std::string metadata_block(const std::map<std::string, std::string>& kv) {
    std::ostringstream os;
    for (const auto& [key, value] : kv) os << "# " << key << '=' << value << '\n';
    return os.str();
}

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    std::size_t e = s.find_last_not_of(" \t\r");
    if (b == std::string::npos) return {};
    return s.substr(b, e - b + 1);
}

} // namespace

std::map<std::string, std::string> parse_key_values(const std::string& text, bool strip_comments) {
    std::map<std::string, std::string> kv;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        std::string t = trim(line);
        if (t.empty()) continue;
        if (t[0] == '#') {
            if (strip_comments) continue;
            t = trim(t.substr(1));
        }
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (!key.empty()) kv[key] = value;
    }
    return kv;
}

} // namespace fracident
