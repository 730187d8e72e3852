#pragma once

// Command implementations behind the rotstar executable. Each returns the
// process exit code: 0 success, 1 quantitative failure, 2 usage or config
// error (the latter is raised as ConfigError and mapped by main).

#include <filesystem>
#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

#include "config.hpp"
#include "rotstar/solver.hpp"

namespace rotstar::cli {

int cmd_check(const RunConfig& config, const std::filesystem::path& out, std::ostream& os);
int cmd_solve(const RunConfig& config, const std::filesystem::path& out, std::ostream& os);
int cmd_scan_b(const RunConfig& config, const std::filesystem::path& out, std::ostream& os);
int cmd_validate(const RunConfig& config, const std::filesystem::path& out, std::ostream& os);
int cmd_energy(const RunConfig& config, const std::filesystem::path& profile_csv, const std::filesystem::path& out,
               std::ostream& os);

/// Profile table with columns r,rho,n,m_eta,Kgrav,Krot,Q,Eprime.
std::string profile_csv(const SolveReport& report);
nlohmann::json report_json(const SolveReport& report);
nlohmann::json conditions_json(const ConditionReport& report);

/// Shortest-exact formatting used by every numeric output.
std::string format_double(double v);

}  // namespace rotstar::cli
