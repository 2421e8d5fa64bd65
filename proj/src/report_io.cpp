#include "elastmix/report_io.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

#include <json.hpp>

namespace elastmix {

namespace {

using nlohmann::ordered_json;

ordered_json number(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

ordered_json config_object(const StudyConfig& c) {
  ordered_json j;
  j["domain"] = to_string(c.domain.kind);
  j["nu"] = c.nus;
  j["E"] = c.E;
  j["k"] = c.ks;
  j["N"] = c.Ns;
  j["nev"] = c.nev;
  j["shift"] = c.shift;
  j["subspace"] = c.arnoldi.subspace;
  j["tolerance"] = c.arnoldi.tolerance;
  j["max_restarts"] = c.arnoldi.max_restarts;
  j["seed"] = c.arnoldi.seed;
  return j;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string study_config_json(const StudyConfig& config) { return config_object(config).dump(); }

void write_report_csv(std::ostream& out, const ConvergenceReport& report) {
  out << "# schema_version=" << kReportSchemaVersion << '\n';
  out << "# config=" << study_config_json(report.config) << '\n';
  out << "nu,k,mode,N,h,omega,alpha,omega_extr,rel_err\n";
  for (const auto& b : report.blocks)
    for (const auto& m : b.modes)
      for (std::size_t l = 0; l < b.N.size(); ++l)
        out << format_double(b.nu) << ',' << b.k << ',' << m.mode << ',' << b.N[l] << ','
            << format_double(b.h[l]) << ',' << format_double(m.omega[l]) << ','
            << format_double(m.fit.alpha) << ',' << format_double(m.fit.omega_extr) << ','
            << format_double(m.rel_err[l]) << '\n';
}

void write_report_json(std::ostream& out, const ConvergenceReport& report) {
  ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["config"] = config_object(report.config);
  j["blocks"] = ordered_json::array();
  for (const auto& b : report.blocks) {
    ordered_json jb;
    jb["nu"] = b.nu;
    jb["k"] = b.k;
    jb["N"] = b.N;
    jb["h"] = b.h;
    jb["modes"] = ordered_json::array();
    for (const auto& m : b.modes) {
      ordered_json jm;
      jm["mode"] = m.mode;
      jm["omega"] = m.omega;
      jm["alpha"] = number(m.fit.alpha);
      jm["omega_extr"] = number(m.fit.omega_extr);
      jm["C"] = number(m.fit.C);
      jm["residual"] = number(m.fit.residual);
      jm["levels_used"] = m.fit.levels_used;
      jm["saturated"] = m.fit.saturated;
      jm["non_monotone"] = m.fit.non_monotone;
      jm["rel_err"] = m.rel_err;
      jb["modes"].push_back(std::move(jm));
    }
    j["blocks"].push_back(std::move(jb));
  }
  out << j.dump(2) << '\n';
}

}  // namespace elastmix
