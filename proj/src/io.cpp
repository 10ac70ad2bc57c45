#include "cq/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cq/errors.hpp"
#include "cq/version.hpp"

namespace cq::io {

namespace {

using nlohmann::json;

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);  // binary keeps line endings fixed
  if (!out) throw Error("cannot open output file: " + path.string());
  return out;
}

void write_csv_header(std::ofstream& out, const Meta& meta) {
  out << "# cqlab " << kVersion << "\n";
  out << "# config=" << meta.hash_hex() << "\n";
  out << "# grid=" << meta.grid_info << "\n";
}

json meta_json(const Meta& meta) {
  return json{{"tool", "cqlab"},
              {"version", kVersion},
              {"config", meta.hash_hex()},
              {"grid", meta.grid_info}};
}

void dump_json(const std::filesystem::path& path, const json& j) {
  auto out = open_out(path);
  out << j.dump(2) << "\n";
}

}  // namespace

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string Meta::hash_hex() const {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a(config)));
  return buf;
}

void write_profile_csv(const std::filesystem::path& path,
                       const shooting::SolitonProfile& profile, const Meta& meta) {
  auto out = open_out(path);
  write_csv_header(out, meta);
  out << "r,P\n";
  for (std::size_t j = 0; j < profile.grid.size(); ++j)
    out << format_number(profile.grid[j]) << "," << format_number(profile.values[j])
        << "\n";
}

void write_profile_json(const std::filesystem::path& path,
                        const shooting::SolitonProfile& profile, const Meta& meta) {
  json j;
  j["meta"] = meta_json(meta);
  j["omega"] = profile.omega;
  j["b"] = profile.center_value;
  j["tail_constant"] = profile.tail_constant;
  j["kind"] = profile.kind == shooting::ProfileKind::CubicQuintic ? "cubic-quintic"
                                                                  : "cubic-only";
  j["grid"] = profile.grid;
  j["values"] = profile.values;
  dump_json(path, j);
}

shooting::SolitonProfile read_profile_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open profile file: " + path.string());
  json j = json::parse(in);
  shooting::SolitonProfile p;
  p.omega = j.at("omega").get<double>();
  p.center_value = j.at("b").get<double>();
  p.tail_constant = j.at("tail_constant").get<double>();
  p.tail_log_c = std::log(p.tail_constant);
  p.kind = j.at("kind").get<std::string>() == "cubic-only"
               ? shooting::ProfileKind::CubicOnly
               : shooting::ProfileKind::CubicQuintic;
  p.grid = j.at("grid").get<std::vector<double>>();
  p.values = j.at("values").get<std::vector<double>>();
  return p;
}

std::string functional_csv_row(double omega, const functionals::FunctionalSet& fs) {
  std::ostringstream os;
  os << format_number(omega) << "," << format_number(fs.mass) << ","
     << format_number(fs.kinetic) << "," << format_number(fs.quartic) << ","
     << format_number(fs.sextic) << "," << format_number(fs.energy()) << ","
     << format_number(fs.virial()) << "," << format_number(fs.beta());
  return os.str();
}

void write_branch_csv(const std::filesystem::path& path, const branch::BranchTable& table,
                      const Meta& meta) {
  auto out = open_out(path);
  write_csv_header(out, meta);
  out << "omega,M,G,L4,L6,E,V,beta\n";
  for (const auto& row : table.rows) out << functional_csv_row(row.omega, row.fs) << "\n";
}

namespace {

json special_json(const branch::SpecialPoints& sp) {
  return json{{"omega_beta_third", sp.omega_beta_third},
              {"mass_beta_third", sp.mass_beta_third},
              {"omega_min_mass", sp.omega_min_mass},
              {"min_mass", sp.min_mass},
              {"omega_zero_energy", sp.omega_zero_energy},
              {"mass_q1", sp.mass_q1},
              {"kinetic_q1", sp.kinetic_q1}};
}

}  // namespace

void write_branch_json(const std::filesystem::path& path, const branch::BranchTable& table,
                       const Meta& meta) {
  json rows = json::array();
  for (const auto& row : table.rows) {
    rows.push_back(json{{"omega", row.omega},
                        {"M", row.fs.mass},
                        {"G", row.fs.kinetic},
                        {"L4", row.fs.quartic},
                        {"L6", row.fs.sextic},
                        {"E", row.fs.energy()},
                        {"V", row.fs.virial()},
                        {"beta", row.fs.beta()}});
  }
  json j;
  j["meta"] = meta_json(meta);
  j["rows"] = rows;
  if (table.special_points) j["special_points"] = special_json(*table.special_points);
  dump_json(path, j);
}

branch::BranchTable read_branch_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open branch file: " + path.string());
  branch::BranchTable table;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("omega,", 0) == 0) continue;
    branch::Row row;
    double e, v, beta;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf", &row.omega,
                    &row.fs.mass, &row.fs.kinetic, &row.fs.quartic, &row.fs.sextic, &e,
                    &v, &beta) != 8)
      throw Error("malformed branch CSV row: " + line);
    table.rows.push_back(row);
  }
  return table;
}

void write_rescaled_csv(const std::filesystem::path& path,
                        const branch::BranchTable& table, const Meta& meta) {
  auto out = open_out(path);
  write_csv_header(out, meta);
  out << "omega,M,G,L4,L6,E,V,beta\n";
  for (const auto& row : table.rows)
    out << functional_csv_row(row.omega, rescale::rescaled_closed_form(row.fs)) << "\n";
}

void write_envelope_csv(const std::filesystem::path& path, const region::RegionModel& model,
                        const Meta& meta) {
  auto out = open_out(path);
  write_csv_header(out, meta);
  out << "m,evmin,provenance,omega\n";
  for (const auto& p : model.evmin_table)
    out << format_number(p.mass) << "," << format_number(p.energy) << ","
        << (p.provenance == region::Provenance::Soliton ? "soliton" : "rescaled") << ","
        << format_number(p.omega) << "\n";
}

void write_thresholds_json(const std::filesystem::path& path,
                           const region::RegionModel& model, const Meta& meta) {
  json j;
  j["meta"] = meta_json(meta);
  j["mass_q1"] = model.thresholds.mass_q1;
  j["mass_star"] = model.thresholds.mass_star;
  j["m0"] = model.thresholds.m0;
  j["evmin_at_star"] = model.thresholds.evmin_at_star;
  j["curve_crossings"] = model.curve_crossings;
  dump_json(path, j);
}

void write_curves_csv(const std::filesystem::path& soliton_path,
                      const std::filesystem::path& rescaled_path,
                      const std::filesystem::path& sheared_path,
                      const region::RegionModel& model, double omega_third,
                      double mass_third, const Meta& meta) {
  {
    auto out = open_out(soliton_path);
    write_csv_header(out, meta);
    out << "omega,M,E\n";
    for (const auto& p : model.soliton_curve)
      out << format_number(p.omega) << "," << format_number(p.mass) << ","
          << format_number(p.energy) << "\n";
  }
  {
    auto out = open_out(rescaled_path);
    write_csv_header(out, meta);
    out << "omega,M,E\n";
    for (const auto& p : model.rescaled_curve)
      out << format_number(p.omega) << "," << format_number(p.mass) << ","
          << format_number(p.energy) << "\n";
  }
  {
    // Shear E + (omega_third/2)(M - M_third) reveals the near-tangent
    // intersection of the two curves.
    auto out = open_out(sheared_path);
    write_csv_header(out, meta);
    out << "curve,M,E_sheared\n";
    auto shear = [&](double m, double e) {
      return e + 0.5 * omega_third * (m - mass_third);
    };
    for (const auto& p : model.soliton_curve)
      out << "soliton," << format_number(p.mass) << ","
          << format_number(shear(p.mass, p.energy)) << "\n";
    for (const auto& p : model.rescaled_curve)
      out << "rescaled," << format_number(p.mass) << ","
          << format_number(shear(p.mass, p.energy)) << "\n";
  }
}

void write_delta_json(const std::filesystem::path& path,
                      const linearization::DeltaSolution& ds, const Meta& meta) {
  json j;
  j["meta"] = meta_json(meta);
  j["omega"] = ds.omega;
  if (ds.sign_change_radius)
    j["r1"] = *ds.sign_change_radius;
  else
    j["r1"] = nullptr;
  switch (ds.terminal) {
    case linearization::TerminalBehavior::DivergesNegative:
      j["terminal"] = "DivergesNegative";
      break;
    case linearization::TerminalBehavior::Decays:
      j["terminal"] = "Decays";
      break;
    case linearization::TerminalBehavior::Indeterminate:
      j["terminal"] = "Indeterminate";
      break;
  }
  j["zero_count"] = ds.zero_count;
  dump_json(path, j);
}

void write_gnh_json(const std::filesystem::path& path, std::span<const GnhRecord> records,
                    const Meta& meta) {
  json arr = json::array();
  for (const auto& r : records) {
    arr.push_back(json{{"alpha", r.alpha},
                       {"omega_opt", r.omega_opt},
                       {"C_alpha", r.c_alpha},
                       {"worst_ratio", r.worst_ratio},
                       {"trials", r.trials},
                       {"seed", r.seed}});
  }
  json j;
  j["meta"] = meta_json(meta);
  j["results"] = arr;
  dump_json(path, j);
}

void write_observables_csv(const std::filesystem::path& path,
                           std::span<const dynamics::Observables> log, const Meta& meta) {
  auto out = open_out(path);
  write_csv_header(out, meta);
  out << "t,M,E,V,A,A_R,sup_u\n";
  for (const auto& o : log)
    out << format_number(o.t) << "," << format_number(o.mass) << ","
        << format_number(o.energy) << "," << format_number(o.virial) << ","
        << format_number(o.weighted_momentum) << ","
        << format_number(o.truncated_momentum) << "," << format_number(o.sup_abs) << "\n";
}

}  // namespace cq::io
