#pragma once

// Identity checks grouped into suites, and the verification report built
// from them. Each record pairs the engine's value (lhs) with the expected
// closed form (rhs); references and notes come from the bundled catalog.

#include <map>
#include <string>
#include <vector>

#include "kkw/boundary.hpp"

namespace kkw {

enum class CheckStatus { Match, Mismatch, FlaggedConvention };
std::string status_name(CheckStatus s);

struct CheckRecord {
  std::string id;
  std::string suite;
  std::string paper_ref;
  CheckStatus status = CheckStatus::Match;
  std::string lhs;
  std::string rhs;
  std::string residual;
  std::string note;
  double wall_seconds = 0.0;
};

struct CatalogEntry {
  std::string paper_ref;
  std::string note;
};

struct CheckCatalog {
  std::map<std::string, CatalogEntry> checks;
  std::map<std::string, std::string> fixture_citations;
  const CatalogEntry* find(const std::string& id) const;
};

CheckCatalog load_catalog(const std::string& path);
std::string default_catalog_path();

struct VerifyOptions {
  int dim = 4;
  int curvature_sign = -1;
  BoundaryFixtures fixtures;
  CheckCatalog catalog;
};

// lichnerowicz, traces, wres, boundary, heat
const std::vector<std::string>& suite_names();

// Runs one suite, or every suite in order for "all". Throws DomainError for
// an unknown suite or an unsupported dimension.
std::vector<CheckRecord> run_suite(const std::string& suite, const VerifyOptions& opt);

struct ReportSummary {
  int match = 0;
  int mismatch = 0;
  int flagged = 0;
};
// Flat-torus oracle comparisons at the default window (K = 30,
// t in [0.02, 0.2]): unperturbed a0 (0.5%), scalar f = 0.3 a2 (2%) and
// two-form a_12 = 0.1 a2 (2%).
std::vector<CheckRecord> torus_records(const CheckCatalog& catalog);

ReportSummary summarize(const std::vector<CheckRecord>& records);

std::string render_json(const std::vector<CheckRecord>& records);
std::string render_text(const std::vector<CheckRecord>& records);

}  // namespace kkw
