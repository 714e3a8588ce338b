#include "adaswitch/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace adaswitch {

void CompetitiveReport::flag(const std::string& f) {
    if (std::find(flags.begin(), flags.end(), f) == flags.end()) flags.push_back(f);
}

bool CompetitiveReport::has_flag(const std::string& f) const {
    return std::find(flags.begin(), flags.end(), f) != flags.end();
}

std::string CompetitiveReport::flags_joined() const {
    std::string out;
    for (const auto& f : flags) {
        if (!out.empty()) out += ';';
        out += f;
    }
    return out;
}

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (x == 0) return "0";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string report_csv_header() {
    return "instance,seed,variant,epsilon,b,c,alpha,val,opt,ratio,phi_star,switches,bound_T1,"
           "bound_T2,monte_carlo_deviation";
}

std::string to_csv_row(const CompetitiveReport& r) {
    auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
    std::string s;
    s += r.instance_id + ',' + std::to_string(r.seed) + ',' + r.variant + ',';
    s += format_number(r.epsilon) + ',' + format_number(r.b) + ',' + format_number(r.c) + ',';
    s += format_number(r.alpha) + ',' + format_number(r.val) + ',' + format_number(r.opt) + ',';
    s += opt(r.ratio) + ',' + format_number(r.phi_star) + ',' + std::to_string(r.switches()) + ',';
    s += opt(r.bound_T1) + ',' + opt(r.bound_T2) + ',' + (r.monte_carlo_deviation ? "1" : "0");
    return s;
}

}  // namespace adaswitch
