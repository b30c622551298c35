#include "tumor/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "tumor/errors.hpp"
#include "tumor/numerics.hpp"

namespace tumor {

namespace {
void row(std::ostream& os, const char* f, double a, double b, double c, double d, double e,
         double g) {
    char buf[220];
    std::snprintf(buf, sizeof buf, f, a, b, c, d, e, g);
    os << buf;
}
} // namespace

void write_snapshots_csv(const TimeSeries& series, std::ostream& os) {
    os << "t,r,sigma,m,E,u\n";
    for (const Snapshot& s : series.snapshots) {
        size_t n = s.sigma.size() - 1;
        for (size_t i = 0; i < s.sigma.size(); ++i) {
            double r = (i == n) ? 1.0 : double(i) / n;
            row(os, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", s.t, r, s.sigma[i], s.m[i], s.E[i],
                s.u[i]);
        }
    }
}

void write_series_csv(const TimeSeries& series, std::ostream& os) {
    os << "t,R,u1,dist_sigma,dist_E,dist_m\n";
    for (const Scalars& s : series.scalars)
        row(os, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", s.t, s.R, s.u1, s.dist_sigma, s.dist_E,
            s.dist_m);
}

InitialData read_initial_csv(const std::filesystem::path& path, int n) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::IoError, "cannot open " + path.string());
    std::string line;
    double R0 = 0.0;
    std::vector<double> r, sig, m, E;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream ss(line.substr(1));
            std::string key;
            ss >> key;
            if (key == "R0") ss >> R0;
            continue;
        }
        if (line.rfind("r,", 0) == 0) continue; // header
        std::istringstream ss(line);
        double vr, vs, vm, vE;
        char comma;
        if (ss >> vr >> comma >> vs >> comma >> vm >> comma >> vE) {
            r.push_back(vr);
            sig.push_back(vs);
            m.push_back(vm);
            E.push_back(vE);
        }
    }
    if (r.size() < 5) fail(ErrorKind::BadConfig, "initial CSV needs >= 5 rows: " + path.string());
    if (!(R0 > 0.0)) fail(ErrorKind::BadConfig, "initial CSV is missing the '# R0 <value>' line");

    InitialData init;
    init.R0 = R0;
    PchipInterpolant is(r, sig), im(r, m), iE(r, E);
    size_t np = size_t(n) + 1;
    init.sigma0.resize(np);
    init.m0.resize(np);
    init.E0.resize(np);
    for (size_t i = 0; i < np; ++i) {
        double x = (i == np - 1) ? 1.0 : double(i) / n;
        init.sigma0[i] = is(x);
        init.m0[i] = im(x);
        init.E0[i] = iE(x);
    }
    return init;
}

void write_json_file(const std::filesystem::path& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) fail(ErrorKind::IoError, "cannot write " + path.string());
    out << j.dump(2) << "\n";
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::IoError, "cannot open " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::BadConfig, "invalid JSON in " + path.string() + ": " + e.what());
    }
    return j;
}

} // namespace tumor
