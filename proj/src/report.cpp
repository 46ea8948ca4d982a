#include <cstdio>

#include <json.hpp>

#include "gibbscert/errors.hpp"
#include "gibbscert/report.hpp"

namespace gibbscert {

std::string format_g12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)h);
  return buf;
}

namespace {

struct Column {
  const char* name;
  const std::optional<std::vector<double>>* data;
};

std::vector<Column> columns(const CompareTable& t) {
  return {{"tv_lower", &t.tv_lower},
          {"tv_upper", &t.tv_upper},
          {"bound_uniform", &t.bound_uniform},
          {"bound_rosenthal", &t.bound_rosenthal},
          {"bound_dks_lower", &t.bound_dks_lower},
          {"bound_dks_upper", &t.bound_dks_upper},
          {"bound_spectral", &t.bound_spectral}};
}

void check_sizes(const CompareTable& t) {
  for (const Column& col : columns(t))
    if (*col.data && (*col.data)->size() != t.ell.size())
      throw domain_error(std::string("compare table: column '") + col.name +
                         "' does not match the ell axis");
}

}  // namespace

void write_compare_csv(const CompareTable& table, std::ostream& out) {
  check_sizes(table);
  out << "ell,tv_lower,tv_upper,bound_uniform,bound_rosenthal,"
         "bound_dks_lower,bound_dks_upper,bound_spectral\n";
  auto cols = columns(table);
  for (std::size_t i = 0; i < table.ell.size(); ++i) {
    out << table.ell[i];
    for (const Column& col : cols) {
      out << ',';
      if (*col.data) out << format_g12((**col.data)[i]);
    }
    out << '\n';
  }
}

void write_compare_json(const CompareTable& table, const ReportMeta& meta,
                        std::ostream& out) {
  check_sizes(table);
  nlohmann::json doc;
  doc["command"] = meta.command;
  doc["seed"] = meta.seed;
  doc["params_hash"] = hash_hex(meta.params_hash);
  doc["ell"] = table.ell;
  for (const Column& col : columns(table))
    if (*col.data) doc[col.name] = **col.data;
  out << doc.dump(2) << '\n';
}

void write_curve_csv(const CurveExport& c, const ReportMeta& meta,
                     std::ostream& out) {
  if (c.ell.size() != c.value.size())
    throw domain_error("curve export: ell and value sizes differ");
  out << "ell,value,kind,params_hash\n";
  for (std::size_t i = 0; i < c.ell.size(); ++i)
    out << c.ell[i] << ',' << format_g12(c.value[i]) << ',' << c.kind << ','
        << hash_hex(meta.params_hash) << '\n';
}

void write_curve_json(const CurveExport& c, const ReportMeta& meta,
                      std::ostream& out) {
  if (c.ell.size() != c.value.size())
    throw domain_error("curve export: ell and value sizes differ");
  nlohmann::json doc;
  doc["command"] = meta.command;
  doc["seed"] = meta.seed;
  doc["params_hash"] = hash_hex(meta.params_hash);
  doc["kind"] = c.kind;
  nlohmann::json params = nlohmann::json::object();
  for (const auto& kv : c.params) params[kv.first] = kv.second;
  doc["params"] = params;
  doc["ell"] = c.ell;
  doc["value"] = c.value;
  out << doc.dump(2) << '\n';
}

}  // namespace gibbscert
