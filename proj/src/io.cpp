#include "renewal/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace renewal::io {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_text_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp);
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw std::runtime_error("short write to " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

std::string mass_csv(const MassFunction& mf) {
    std::string s = "n,u,U\n";
    for (std::size_t n = 0; n < mf.u.size(); ++n) {
        s += std::to_string(n);
        s += ',';
        s += fmt(mf.u[n]);
        s += ',';
        s += fmt(mf.U[n]);
        s += '\n';
    }
    return s;
}

std::string model_csv(const IntersectionModel& model) {
    std::string s = "n,w,g,G,v,psi_star\n";
    for (std::size_t n = 0; n <= model.n_max(); ++n) {
        s += std::to_string(n);
        s += ',';
        s += fmt(model.w[n]);
        s += ',';
        s += fmt(model.g[n]);
        s += ',';
        s += fmt(model.G[n]);
        s += ',';
        s += fmt(model.v[n]);
        s += ',';
        s += fmt(n == 0 ? 0.0 : model.psi_star(n));
        s += '\n';
    }
    return s;
}

std::string report_csv(const AsymptoticReport& rep) {
    std::string s = "n,exact,asymptotic,ratio,abs_err,rel_err\n";
    for (const auto& row : rep.rows) {
        const double abs_err = std::fabs(row.exact - row.asym);
        const double rel_err = row.asym != 0.0 ? abs_err / std::fabs(row.asym)
                                               : std::numeric_limits<double>::infinity();
        s += std::to_string(row.n);
        s += ',';
        s += fmt(row.exact);
        s += ',';
        s += fmt(row.asym);
        s += ',';
        s += fmt(row.ratio);
        s += ',';
        s += fmt(abs_err);
        s += ',';
        s += fmt(rel_err);
        s += '\n';
    }
    return s;
}

std::string classification_json(const Classification& cls) {
    nlohmann::json j;
    j["recurrent"] = cls.recurrent;
    j["theta_star"] = cls.theta_star;
    j["alpha_star"] = cls.alpha_star;
    j["heuristic"] = cls.heuristic;
    j["swapped"] = cls.swapped;
    return j.dump(2) + "\n";
}

}  // namespace renewal::io
