#include "cmrs/catalog.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <mutex>
#include <sstream>

#include "cmrs/errors.hpp"

namespace cmrs {

namespace fs = std::filesystem;
using nlohmann::json;

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr))
    throw std::runtime_error("EVP_Digest failed");
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return out.str();
}

void write_atomic(const fs::path& path, const std::string& bytes) {
  fs::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + tmp.string());
    f << bytes;
    if (!f.flush()) throw std::runtime_error("short write to " + tmp.string());
  }
  fs::rename(tmp, path);
}

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

// One unit of catalog work: builds a certificate (or throws).
struct Job {
  std::string kind;
  GroupSpec group;
  json params;
  std::string name;
  std::function<Certificate()> make;
};

std::string stem(const std::string& kind, const GroupSpec& g, const json& params) {
  std::string s = kind + "_" + g.to_string();
  for (const auto& [k, v] : params.items()) s += "_" + k + std::to_string(v.get<std::size_t>());
  return s;
}

std::vector<Job> grid(const CatalogOptions& opt) {
  std::vector<Job> jobs;
  auto want = [&](const char* k) { return opt.kinds.count(k) > 0; };
  auto add = [&](std::string kind, const GroupSpec& g, json params, std::function<Certificate()> make) {
    auto name = stem(kind, g, params);
    jobs.push_back({std::move(kind), g, std::move(params), std::move(name), std::move(make)});
  };
  for (const auto& g : abelian_groups_up_to(opt.max_order)) {
    if (g.order() < 2) continue;
    const bool in_g = admits_complete_mapping(g);
    if (in_g && want("partition"))
      for (auto m : divisors(g.order()))
        if (m > 2) add("partition", g, {{"m", m}}, [g, m] { return Certificate(zero_sum_partition(g, m)); });
    if (in_g && want("cm_partition")) {
      const auto odd = g.odd_part().order();
      if (odd == 1) {
        add("cm_partition", g, json::object(), [g] { return Certificate(cm_zero_sum_partition(g)); });
      } else {
        for (auto k : divisors(odd))
          if (k > 1) add("cm_partition", g, {{"k", k}}, [g, k] { return Certificate(cm_zero_sum_partition(g, k)); });
      }
    }
    if (in_g && want("kas")) {
      if (g.is_two_group()) {
        const auto m = two_group_class_size(g);
        for (std::size_t j = 2; j <= 7; ++j)
          add("kas", g, {{"j", j}, {"m", m}}, [g, j, m] { return Certificate(kas(g, j, m)); });
      } else {
        for (auto m : divisors(g.order()))
          if (m > 2)
            for (std::size_t j : {2, 4})
              add("kas", g, {{"j", j}, {"m", m}}, [g, j, m] { return Certificate(kas(g, j, m)); });
      }
    }
    if (want("mrs")) {
      const auto n = g.order();
      for (std::size_t a = 2; a <= n; ++a)
        for (std::size_t b = 2; a * b <= n; ++b) {
          if (n % (a * b) != 0) continue;
          const auto c = n / (a * b);
          const json params = {{"a", a}, {"b", b}, {"c", c}};
          add("verdict", g, params, [g, a, b, c] { return Certificate(make_verdict(g, a, b, c)); });
          if (decide_existence(g, a, b, c).status == Existence::Exists) {
            const auto sopt = opt.search;
            add("mrs", g, params, [g, a, b, c, sopt] { return Certificate(mrs_construct(g, a, b, c, sopt)); });
          }
        }
    }
  }
  return jobs;
}

std::vector<std::string> provenance_of(const Certificate& c) {
  if (const auto* r = std::get_if<RectangleSet>(&c)) return r->provenance;
  return {};
}

json entry_json(const CatalogEntry& e) {
  return {{"kind", e.kind}, {"group", e.group}, {"params", e.params}, {"path", e.path},
          {"digest", e.digest}, {"provenance", e.provenance}};
}

}  // namespace

CatalogReport build_catalog(const fs::path& root, const CatalogOptions& opt) {
  if (opt.max_order > kCatalogMaxOrder)
    throw PreconditionError("catalog max_order " + std::to_string(opt.max_order) + " exceeds the bound " +
                            std::to_string(kCatalogMaxOrder));
  const auto jobs = grid(opt);
  std::vector<std::optional<CatalogEntry>> done(jobs.size());
  std::vector<std::string> failures(jobs.size());
  std::vector<std::optional<std::string>> unknown(jobs.size());
  const auto count = static_cast<std::ptrdiff_t>(jobs.size());

#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t k = 0; k < count; ++k) {
    const auto& job = jobs[static_cast<std::size_t>(k)];
    try {
      auto cert = job.make();
      if (auto err = check_certificate(cert)) throw VerificationError(*err);
      if (auto* v = std::get_if<VerdictRecord>(&cert)) {
        if (v->status == Existence::Exists) v->witness_path = "mrs/" + stem("mrs", job.group, job.params) + ".json";
        if (v->status == Existence::Unknown) unknown[static_cast<std::size_t>(k)] = job.name;
      }
      const auto bytes = serialize(cert);
      const std::string rel = job.kind + "/" + job.name + ".json";
      write_atomic(root / rel, bytes);
      done[static_cast<std::size_t>(k)] =
          CatalogEntry{job.kind, job.group.to_string(), job.params, rel, sha256_hex(bytes), provenance_of(cert)};
    } catch (const std::exception& e) {
      failures[static_cast<std::size_t>(k)] = job.name + ": " + e.what();
    }
  }

  CatalogReport report;
  json entries = json::array();
  std::map<std::string, std::size_t> counts;
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    if (done[k]) {
      entries.push_back(entry_json(*done[k]));
      ++counts[done[k]->kind];
      report.entries.push_back(std::move(*done[k]));
    } else {
      report.defects.push_back(failures[k]);
    }
    if (unknown[k]) report.unknown.push_back(*unknown[k]);
  }
  const json index = {{"max_order", opt.max_order}, {"entries", entries}, {"counts", counts},
                      {"unknown", report.unknown}, {"defects", report.defects}};
  write_atomic(root / "index.json", index.dump(1) + "\n");
  return report;
}

LoadReport load_catalog(const fs::path& root) {
  LoadReport report;
  json index;
  try {
    index = json::parse(read_file(root / "index.json"));
  } catch (const std::exception& e) {
    report.defects.push_back(std::string("index.json: ") + e.what());
    return report;
  }
  const auto& entries = index.at("entries");
  std::vector<std::string> defects(entries.size());
  const auto count = static_cast<std::ptrdiff_t>(entries.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t k = 0; k < count; ++k) {
    const auto& e = entries[static_cast<std::size_t>(k)];
    const auto path = e.at("path").get<std::string>();
    auto& out = defects[static_cast<std::size_t>(k)];
    try {
      const auto bytes = read_file(root / path);
      if (sha256_hex(bytes) != e.at("digest").get<std::string>()) {
        out = path + ": digest mismatch";
        continue;
      }
      const auto cert = parse_certificate(bytes);
      if (kind_of(cert) != e.at("kind").get<std::string>()) {
        out = path + ": kind mismatch";
      } else if (auto err = check_certificate(cert)) {
        out = path + ": " + *err;
      } else if (serialize(cert) != bytes) {
        out = path + ": round trip is not byte-identical";
      }
    } catch (const std::exception& ex) {
      out = path + ": " + ex.what();
    }
  }
  for (auto& d : defects) {
    if (d.empty())
      ++report.loaded;
    else
      report.defects.push_back(std::move(d));
  }
  return report;
}

}  // namespace cmrs
