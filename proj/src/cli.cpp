#include "cmrs/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "cmrs/catalog.hpp"
#include "cmrs/errors.hpp"
#include "cmrs/io.hpp"

namespace cmrs {

namespace {

int decide_code(Existence e) {
  switch (e) {
    case Existence::Exists: return 0;
    case Existence::NotExists: return 3;
    case Existence::Unknown: return 2;
  }
  return 1;
}

std::string read_all(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

void emit(const Certificate& c, const std::string& out_path, std::ostream& out) {
  const auto bytes = serialize(c);
  if (out_path.empty())
    out << bytes;
  else
    write_atomic(out_path, bytes);
}

struct Args {
  std::string group;
  std::size_t a = 0, b = 0, c = 0, m = 0, j = 0, k = 0;
  std::uint64_t seed = 0;
  std::uint64_t budget = 10'000'000;
  std::string out;
};

bool selftest(std::ostream& out) {
  bool ok = true;
  auto check = [&](const std::string& name, auto&& f) {
    bool pass = false;
    try {
      pass = f();
    } catch (const std::exception& e) {
      out << name << ": " << e.what() << "\n";
    }
    out << (pass ? "PASS " : "FAIL ") << name << "\n";
    ok = ok && pass;
  };
  check("sum of Z2xZ2 is 0", [] { return sum_all_elements(GroupSpec::parse("Z2xZ2")) == GroupSpec::parse("Z2xZ2").zero(); });
  check("cm Z4xZ4", [] { return verify_cm_certificate(cm_two_group(GroupSpec::parse("Z4xZ4"))); });
  check("kas Z4xZ4 j=5", [] { return verify_kas(kas(GroupSpec::parse("Z4xZ4"), 5, 4)); });
  check("mrs Z3xZ2xZ2 3x4", [] { return verify_mrs(mrs_construct(GroupSpec::parse("Z3xZ2xZ2"), 3, 4, 1)); });
  check("mrs Z6 3x2 infeasible",
        [] { return mrs_search(GroupSpec::parse("Z6"), 3, 2, 1).status == search::Status::Infeasible; });
  return ok;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Zero-sum partitions, Kotzig arrays and magic rectangle sets over finite Abelian groups", "cmrs"};
  app.require_subcommand(1);
  Args args;

  auto add_group = [&](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("-g,--group", args.group, "group, e.g. Z4xZ2xZ3 or 4,2,3");
    if (required) opt->required();
  };
  auto add_shape = [&](CLI::App* sub, bool required) {
    for (auto [flag, dst] : {std::pair{"-a", &args.a}, std::pair{"-b", &args.b}, std::pair{"-c", &args.c}}) {
      auto* o = sub->add_option(flag, *dst);
      if (required) o->required();
    }
  };
  auto add_search = [&](CLI::App* sub) {
    sub->add_option("--seed", args.seed, "search seed (0 keeps the canonical order)");
    sub->add_option("--budget", args.budget, "search node budget");
  };

  auto* decide = app.add_subcommand("decide", "decide existence of MRS(a,b;c) on a group");
  add_group(decide, true);
  add_shape(decide, true);

  auto* construct = app.add_subcommand("construct", "build and verify a certificate");
  std::string kind;
  construct->add_option("kind", kind, "mrs | cm | partition | kas")
      ->required()
      ->check(CLI::IsMember({"mrs", "cm", "partition", "kas"}));
  add_group(construct, true);
  add_shape(construct, false);
  construct->add_option("-m", args.m, "class size / array width");
  construct->add_option("-j", args.j, "rows of a Kotzig array set");
  construct->add_option("-k", args.k, "odd divisor for cm");
  construct->add_option("--out", args.out, "write to this file instead of stdout");
  add_search(construct);

  auto* verify = app.add_subcommand("verify", "verify a certificate file");
  std::string path;
  verify->add_option("path", path)->required();

  auto* catalog = app.add_subcommand("catalog", "build or reload the certificate catalog");
  std::uint64_t max_order = 16;
  std::vector<std::string> kinds;
  std::string root;
  bool load = false;
  catalog->add_option("--max-order", max_order, "largest group order (at most 64)");
  catalog->add_option("--kinds", kinds, "partition, cm_partition, kas, mrs")->delimiter(',');
  catalog->add_option("--root", root, "catalog directory (default $CMRS_CATALOG_ROOT or ./catalog)");
  catalog->add_flag("--load", load, "re-verify an existing catalog instead of building");
  add_search(catalog);

  auto* self = app.add_subcommand("selftest", "run a few quick end-to-end checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << e.what() << "\n";
    return 1;
  }

  const search::Options sopt{args.budget, args.seed, false};
  try {
    if (decide->parsed()) {
      const auto g = GroupSpec::parse(args.group);
      const auto v = make_verdict(g, args.a, args.b, args.c);
      out << serialize(v);
      return decide_code(v.status);
    }
    if (construct->parsed()) {
      const auto g = GroupSpec::parse(args.group);
      if (kind == "mrs") {
        if (!args.a || !args.b || !args.c) throw PreconditionError("construct mrs needs -a, -b and -c");
        emit(mrs_construct(g, args.a, args.b, args.c, sopt), args.out, out);
      } else if (kind == "cm") {
        std::optional<std::size_t> k;
        if (args.k) k = args.k;
        emit(cm_zero_sum_partition(g, k), args.out, out);
      } else if (kind == "partition") {
        if (!args.m) throw PreconditionError("construct partition needs -m");
        emit(zero_sum_partition(g, args.m, {args.budget, args.seed}), args.out, out);
      } else {
        if (!args.j) throw PreconditionError("construct kas needs -j");
        std::size_t m = args.m;
        if (!m) m = g.is_two_group() ? two_group_class_size(g) : g.order();
        emit(kas(g, args.j, m), args.out, out);
      }
      return 0;
    }
    if (verify->parsed()) {
      std::optional<std::string> locus;
      std::string kind_name = "unknown";
      try {
        const auto cert = parse_certificate(read_all(path));
        kind_name = kind_of(cert);
        locus = check_certificate(cert);
      } catch (const ParseError& e) {
        locus = std::string("parse: ") + e.what();
      }
      nlohmann::json res = {{"kind", kind_name}, {"ok", !locus}};
      if (locus) res["locus"] = *locus;
      out << res.dump() << "\n";
      return locus ? 1 : 0;
    }
    if (catalog->parsed()) {
      if (root.empty()) {
        const char* env = std::getenv("CMRS_CATALOG_ROOT");
        root = env ? env : "catalog";
      }
      if (load) {
        const auto rep = load_catalog(root);
        for (const auto& d : rep.defects) err << "defect: " << d << "\n";
        out << nlohmann::json{{"loaded", rep.loaded}, {"defects", rep.defects.size()}}.dump() << "\n";
        return rep.defects.empty() ? 0 : 1;
      }
      CatalogOptions copt;
      copt.max_order = max_order;
      if (!kinds.empty()) copt.kinds = {kinds.begin(), kinds.end()};
      copt.search = sopt;
      const auto rep = build_catalog(root, copt);
      for (const auto& d : rep.defects) err << "defect: " << d << "\n";
      out << nlohmann::json{{"entries", rep.entries.size()}, {"unknown", rep.unknown.size()},
                            {"defects", rep.defects.size()}}
                 .dump()
          << "\n";
      return rep.defects.empty() ? 0 : 1;
    }
    if (self->parsed()) return selftest(out) ? 0 : 1;
  } catch (const InfeasibleError& e) {
    err << "refused: " << e.what() << "\n";
    return 3;
  } catch (const OutOfRangeError& e) {
    err << "refused: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace cmrs
