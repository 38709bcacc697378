#include <chrono>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "zs/constants.hpp"
#include "zs/extractor.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerificationFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;

zs::GroupTable make_group(const std::vector<std::string>& spec) {
  if (spec.size() != 2) throw CLI::ValidationError("--group expects a kind and a parameter");
  const std::string& kind = spec[0];
  if (kind == "cyclic") return zs::GroupTable::cyclic(std::stoi(spec[1]));
  if (kind == "heisenberg") return zs::GroupTable::heisenberg(std::stoi(spec[1]));
  if (kind == "abelian") {
    // "abelian P E1,E2,..." packs prime and exponent list in one token
    std::istringstream in(spec[1]);
    int p = 0;
    in >> p;
    std::string rest;
    in >> rest;
    std::vector<int> exps;
    std::istringstream el(rest);
    std::string tok;
    while (std::getline(el, tok, ',')) exps.push_back(std::stoi(tok));
    return zs::GroupTable::abelian_p_group(p, exps);
  }
  throw CLI::ValidationError("unknown group kind '" + kind + "'");
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
  }
};

void print_search(const zs::SearchReport& rep, const std::string& format, double ms) {
  if (format == "records") {
    std::cout << rep.to_records();
    return;
  }
  std::cout << rep.constant << "(" << rep.group_desc << ") = " << rep.value << " ["
            << (rep.exact ? "EXACT" : "LOWER_BOUND_ONLY") << "]\n";
  for (const auto& w : rep.witnesses) std::cout << "  witness: " << w << "\n";
  for (const auto& n : rep.notes) std::cout << "  note: " << n << "\n";
  std::cout << "  states explored: " << rep.states_explored << ", wall: " << ms << " ms\n";
}

int print_verify(const zs::VerifyReport& rep, const std::string& format, double ms) {
  if (format == "records") {
    std::cout << rep.to_records();
  } else {
    std::cout << rep.name << ": " << (rep.ok ? "PASS" : "FAIL") << " (" << rep.cases_checked
              << " cases, " << ms << " ms)\n";
    for (const auto& f : rep.failures) std::cout << "  failure: " << f << "\n";
    for (const auto& n : rep.notes) std::cout << "  note: " << n << "\n";
  }
  return rep.ok ? kExitOk : kExitVerificationFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"zero-sum constants, certificates and extraction over small groups"};
  app.require_subcommand(1);

  std::string format = "human";
  app.add_option("--format", format)->check(CLI::IsMember({"human", "records"}));

  std::vector<std::string> group_spec{"heisenberg", "3"};
  std::string seq_text;
  zs::SearchLimits lim;
  auto add_common = [&](CLI::App* cmd, bool with_seq = false) {
    cmd->add_option("--format", format)->check(CLI::IsMember({"human", "records"}));
    cmd->add_option("--group", group_spec, "cyclic N | abelian \"P E1,E2,..\" | heisenberg P")
        ->expected(2);
    cmd->add_option("--seed", lim.seed);
    cmd->add_option("--workers", lim.workers);
    cmd->add_option("--trials", lim.trials);
    cmd->add_option("--budget", lim.dp_budget);
    cmd->add_option("--max-nodes", lim.max_nodes);
    cmd->add_option("--checkpoint", lim.checkpoint_path);
    cmd->add_flag("--resume", lim.resume);
    if (with_seq) cmd->add_option("--seq", seq_text, "sequence, e.g. \"x*2 y xyv\"");
  };

  auto* compute = app.add_subcommand("compute", "search a zero-sum constant");
  std::string constant;
  compute->add_option("constant", constant)->required()->check(CLI::IsMember({"d", "D", "s", "E"}));
  add_common(compute);

  auto* verify = app.add_subcommand("verify", "check a structural statement");
  std::string statement;
  verify->add_option("statement", statement)
      ->required()
      ->check(CLI::IsMember({"lemma-2.4", "lemma-2.5", "lemma-2.7", "lemma-3.3", "lemma-3.4",
                             "thm-2.6", "thm-2.8", "thm-2.9", "thm-3.1-tables"}));
  std::vector<int> ns{3, 5, 7, 9, 11, 13};
  verify->add_option("--n", ns, "cyclic orders for the multiplicity lemma");
  add_common(verify);

  auto* extract = app.add_subcommand("extract", "constructive product-one extraction");
  int extract_len = 27;
  extract->add_option("length", extract_len)->required()->check(CLI::IsMember({7, 27}));
  add_common(extract, /*with_seq=*/true);

  auto* egz = app.add_subcommand("egz", "certificates and reorderings");
  auto* egz_certify = egz->add_subcommand("certify");
  auto* egz_reorder = egz->add_subcommand("reorder");
  std::string target_name = "1";
  egz_reorder->add_option("--target", target_name, "central target element");
  add_common(egz_certify, true);
  add_common(egz_reorder, true);
  egz->require_subcommand(1);

  auto* fuzz = app.add_subcommand("fuzz", "randomized length-33 extraction campaign");
  std::string generator = "uniform";
  fuzz->add_option("--generator", generator)
      ->check(CLI::IsMember({"uniform", "two-class", "three-central", "one-class", "adversarial"}));
  add_common(fuzz);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    Timer timer;
    if (compute->parsed()) {
      const zs::GroupTable G = make_group(group_spec);
      zs::SearchReport rep;
      if (constant == "d") rep = zs::small_davenport(G, lim);
      else if (constant == "D") rep = zs::large_davenport(G, lim);
      else if (constant == "s") rep = zs::egz_constant_s(G, lim);
      else rep = zs::gao_constant_E(G, lim);
      print_search(rep, format, timer.ms());
      for (const auto& s : rep.shard_log)
        if (s.rfind("aborted: node limit", 0) == 0) return kExitBudget;
      return kExitOk;
    }
    if (verify->parsed()) {
      if (statement == "lemma-2.4") {
        int rc = kExitOk;
        for (int n : ns) {
          zs::VerifyReport rep = zs::verify_ben_lemma(n, lim);
          rc = std::max(rc, print_verify(rep, format, timer.ms()));
        }
        return rc;
      }
      const zs::GroupTable G = make_group(group_spec);
      zs::VerifyReport rep;
      if (statement == "lemma-2.5") rep = zs::verify_olson_minus1(G, lim);
      else if (statement == "lemma-2.7") rep = zs::verify_lemma_2_7(G, lim);
      else if (statement == "lemma-3.3") rep = zs::verify_c3_selection_lemma();
      else if (statement == "lemma-3.4") rep = zs::verify_twin_combination_lemma(G);
      else if (statement == "thm-3.1-tables") rep = zs::validate_theorem31_tables(G);
      else rep = zs::verify_structured_theorems_2x(G, lim);  // thm-2.6/2.8/2.9
      return print_verify(rep, format, timer.ms());
    }
    if (extract->parsed()) {
      const zs::GroupTable G = make_group(group_spec);
      const zs::Sequence S = zs::Sequence::parse(G, seq_text);
      zs::ExtractResult res = extract_len == 7
                                  ? zs::extract_product_one_7(S, lim.dp_budget)
                                  : zs::extract_product_one_27(S, lim.seed, lim.dp_budget);
      if (format == "records") {
        std::cout << "zsreport 1\nkind extract\nlayer " << res.layer << "\ntrace " << res.trace
                  << "\n" << res.witness.to_line(G) << "\nend\n";
      } else {
        std::cout << "extracted via layer " << res.layer << " (" << res.trace << ") in "
                  << timer.ms() << " ms\n  " << res.witness.to_line(G) << "\n";
      }
      return kExitOk;
    }
    if (egz->parsed()) {
      const zs::GroupTable G = make_group(group_spec);
      const zs::Sequence S = zs::Sequence::parse(G, seq_text);
      auto cert = zs::certify_egz(S);
      if (!cert) {
        std::cout << "no certificate: sequence lacks a central product or principal part\n";
        return kExitVerificationFailed;
      }
      if (egz_certify->parsed()) {
        std::cout << cert->to_text() << "\n";
        return kExitOk;
      }
      const zs::Elem target = G.elem_by_name(target_name);
      auto w = zs::egz_reorder_to_central(*cert, target);
      if (!w) {
        std::cout << "target " << target_name << " is not reachable from this certificate\n";
        return kExitVerificationFailed;
      }
      std::cout << w->to_line(G) << "\n";
      return kExitOk;
    }
    if (fuzz->parsed()) {
      const zs::GroupTable G = make_group(group_spec);
      zs::FuzzStats stats =
          zs::fuzz_extract27(G, generator, lim.trials, lim.seed, lim.workers);
      if (format == "records") {
        std::cout << stats.to_records();
      } else {
        std::cout << "fuzz " << stats.generator << ": " << stats.trials << " trials, "
                  << stats.failures.size() << " failures, median " << stats.median_ms
                  << " ms, max " << stats.max_ms << " ms\n";
        for (int l = 0; l < 5; ++l) std::cout << "  layer " << l << ": " << stats.layer_hist[l] << "\n";
        for (const auto& f : stats.failures) std::cout << "  failure: " << f << "\n";
      }
      return stats.failures.empty() ? kExitOk : kExitVerificationFailed;
    }
  } catch (const zs::StateBudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kExitBudget;
  } catch (const zs::ExtractionFailed& e) {
    std::cerr << "extraction failed: " << e.what() << "\n";
    return kExitVerificationFailed;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitVerificationFailed;
  }
  return kExitUsage;
}
