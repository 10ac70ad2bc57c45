#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "cq/branch.hpp"
#include "cq/dynamics.hpp"
#include "cq/linearization.hpp"
#include "cq/region.hpp"
#include "cq/rescale.hpp"
#include "cq/shooting.hpp"

namespace cq::io {

/// Full-precision decimal text (17 significant digits, '.' separator).
std::string format_number(double v);

std::uint64_t fnv1a(std::string_view text);

/// Header embedded in every output file: tool version, hash of the
/// originating configuration, and grid parameters.
struct Meta {
  std::string config;      // canonical config string, hashed into the header
  std::string grid_info;   // human-readable grid parameters
  std::string hash_hex() const;
};

void write_profile_csv(const std::filesystem::path& path,
                       const shooting::SolitonProfile& profile, const Meta& meta);
void write_profile_json(const std::filesystem::path& path,
                        const shooting::SolitonProfile& profile, const Meta& meta);
shooting::SolitonProfile read_profile_json(const std::filesystem::path& path);

/// One functional-set row: omega,M,G,L4,L6,E,V,beta.
std::string functional_csv_row(double omega, const functionals::FunctionalSet& fs);

void write_branch_csv(const std::filesystem::path& path, const branch::BranchTable& table,
                      const Meta& meta);
void write_branch_json(const std::filesystem::path& path, const branch::BranchTable& table,
                       const Meta& meta);
branch::BranchTable read_branch_csv(const std::filesystem::path& path);

void write_rescaled_csv(const std::filesystem::path& path,
                        const branch::BranchTable& table, const Meta& meta);

void write_envelope_csv(const std::filesystem::path& path, const region::RegionModel& model,
                        const Meta& meta);
void write_thresholds_json(const std::filesystem::path& path,
                           const region::RegionModel& model, const Meta& meta);
void write_curves_csv(const std::filesystem::path& soliton_path,
                      const std::filesystem::path& rescaled_path,
                      const std::filesystem::path& sheared_path,
                      const region::RegionModel& model, double omega_third,
                      double mass_third, const Meta& meta);

void write_delta_json(const std::filesystem::path& path,
                      const linearization::DeltaSolution& ds, const Meta& meta);

struct GnhRecord {
  double alpha = 0.0;
  double omega_opt = 0.0;
  double c_alpha = 0.0;
  double worst_ratio = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};
void write_gnh_json(const std::filesystem::path& path, std::span<const GnhRecord> records,
                    const Meta& meta);

void write_observables_csv(const std::filesystem::path& path,
                           std::span<const dynamics::Observables> log, const Meta& meta);

}  // namespace cq::io
