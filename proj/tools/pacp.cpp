// pacp: command-line front end for the change-point preferential attachment toolkit.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pacp/campaign.hpp"
#include "pacp/errors.hpp"
#include "pacp/experiments.hpp"
#include "pacp/graph.hpp"
#include "pacp/inference.hpp"
#include "pacp/likelihood.hpp"
#include "pacp/reduction.hpp"
#include "pacp/simulator.hpp"
#include "pacp/theory.hpp"

namespace {

using json = nlohmann::ordered_json;

constexpr const char* kVersion = "1.0.0";
constexpr const char* kSchema = "v1";

constexpr int kExitOk = 0;
constexpr int kExitBadArgs = 2;
constexpr int kExitDomain = 3;

// Invalid flag values or unusable files: exit 2.
struct BadArgs : std::runtime_error {
  BadArgs(std::string kind, const std::string& msg) : std::runtime_error(msg), kind(std::move(kind)) {}
  std::string kind;
};

void check_arg(bool cond, const std::string& msg) {
  if (!cond) throw BadArgs("BadArguments", msg);
}

// Options registered with their bound variables so every output can echo the
// full configuration, defaults included.
class Command {
 public:
  Command(CLI::App& app, const std::string& name, const std::string& desc)
      : sub_(app.add_subcommand(name, desc)), name_(name) {}

  template <class T>
  CLI::Option* add(const std::string& flag, T& var, const std::string& desc) {
    auto* o = sub_->add_option("--" + flag, var, desc)->capture_default_str();
    echo_.emplace_back(flag, [&var] { return json(var); });
    return o;
  }

  template <class T>
  CLI::Option* add_optional(const std::string& flag, std::optional<T>& var,
                            const std::string& desc) {
    auto* o = sub_->add_option("--" + flag, var, desc);
    echo_.emplace_back(flag, [&var] { return var ? json(*var) : json(nullptr); });
    return o;
  }

  CLI::Option* add_flag(const std::string& flag, bool& var, const std::string& desc) {
    auto* o = sub_->add_flag("--" + flag, var, desc);
    echo_.emplace_back(flag, [&var] { return json(var); });
    return o;
  }

  // Input paths are echoed so a run can be replayed; empty means unset.
  CLI::Option* add_input(const std::string& flag, std::string& var, const std::string& desc) {
    auto* o = sub_->add_option("--" + flag, var, desc);
    echo_.emplace_back(flag, [&var] { return var.empty() ? json(nullptr) : json(var); });
    return o;
  }

  // Output paths and thread counts do not affect results and are not echoed.
  CLI::Option* add_io(const std::string& flag, std::string& var, const std::string& desc) {
    return sub_->add_option("--" + flag, var, desc);
  }
  CLI::Option* add_threads(std::optional<int>& var) {
    return sub_->add_option("--threads", var, "worker threads (PACP_THREADS overrides)");
  }

  json echo() const {
    json j = json::object();
    for (const auto& [k, f] : echo_) j[k] = f();
    return j;
  }
  CLI::App* app() const { return sub_; }
  const std::string& name() const { return name_; }

 private:
  CLI::App* sub_;
  std::string name_;
  std::vector<std::pair<std::string, std::function<json()>>> echo_;
};

struct Output {
  json result;
  std::optional<std::uint64_t> seed;
  const pacp::McResult* table = nullptr;
};

void check_delta(double delta, int m, const char* name) {
  check_arg(std::isfinite(delta) && delta > -m,
            std::string(name) + " must exceed -m (" + std::to_string(-m) + ")");
}

pacp::AttachmentLog load_graph(const std::string& path) {
  check_arg(!path.empty(), "--graph is required");
  std::ifstream in(path);
  if (!in) throw BadArgs("IoError", "cannot open graph file: " + path);
  return pacp::read_palog(in);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw BadArgs("IoError", "cannot write file: " + path);
  out << text;
  if (!out) throw BadArgs("IoError", "write failed: " + path);
}

json root_json(const pacp::RootResult& r) {
  json j;
  j["status"] = pacp::mle_status_name(r.status);
  j["estimate"] = r.estimate;
  j["score"] = r.score_at_estimate;
  j["bracket"] = {r.bracket_lo, r.bracket_hi};
  j["bracket_scores"] = {r.score_lo, r.score_hi};
  j["iterations"] = r.iterations;
  return j;
}

json verdict_json(const pacp::TestVerdict& v) {
  json j;
  j["mode"] = v.mode == pacp::TestMode::KnownParams ? "known" : "plugin";
  j["statistic"] = v.statistic;
  j["reject"] = v.reject;
  j["verdict"] = v.reject ? "reject" : "accept";
  j["delta0"] = v.delta0;
  j["delta1"] = v.delta1;
  return j;
}

json campaign_json(const pacp::McResult& r) { return r.summary(); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pacp: change-point preferential attachment toolkit"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::string out_path;
  std::string csv_path;
  std::optional<int> threads;
  std::function<Output()> action;
  const Command* active = nullptr;
  std::vector<std::unique_ptr<Command>> commands;

  auto make = [&](const std::string& name, const std::string& desc) -> Command& {
    commands.push_back(std::make_unique<Command>(app, name, desc));
    return *commands.back();
  };

  // simulate
  std::int64_t n = 0;
  int m = 1;
  double delta0 = 0.0;
  std::optional<double> delta1_opt;
  std::optional<std::int64_t> tau_opt;
  std::uint64_t seed = 0;
  {
    auto& c = make("simulate", "simulate a graph and write it as PALOG");
    c.add("n", n, "number of arrivals")->required();
    c.add("m", m, "edges per arrival");
    c.add("delta0", delta0, "attachment shift (before the change)");
    c.add_optional("delta1", delta1_opt, "attachment shift after the change");
    c.add_optional("tau", tau_opt, "change time");
    c.add("seed", seed, "master seed");
    c.add_io("out", out_path, "PALOG output path (default: embed in the JSON result)");
    c.app()->callback([&, cp = &c] {
      active = cp;
      action = [&]() -> Output {
        check_arg(n >= 1 && m >= 1, "requires n >= 1 and m >= 1");
        check_delta(delta0, m, "--delta0");
        check_arg(delta1_opt.has_value() == tau_opt.has_value(),
                  "--delta1 and --tau must be given together");
        auto profile = pacp::DeltaProfile::constant(delta0);
        if (tau_opt) {
          check_delta(*delta1_opt, m, "--delta1");
          check_arg(*tau_opt >= 1 && *tau_opt <= n, "--tau must lie in [1, n]");
          profile = pacp::DeltaProfile::step(delta0, *delta1_opt, *tau_opt);
        }
        const auto g = pacp::simulate(n, m, profile, seed);
        const auto text = pacp::to_palog(g);
        Output o;
        o.seed = seed;
        o.result["n"] = g.n();
        o.result["m"] = g.m();
        o.result["edges"] = g.n() * g.m();
        if (out_path.empty()) {
          o.result["palog"] = text;
        } else {
          write_text(out_path, text);
          o.result["path"] = out_path;
        }
        out_path.clear();  // JSON goes to stdout
        return o;
      };
    });
  }

  // loglik
  std::string graph_path;
  {
    auto& c = make("loglik", "log-likelihood of a PALOG graph");
    c.add_input("graph", graph_path, "PALOG input")->required();
    c.add("delta0", delta0, "attachment shift (before the change)");
    c.add_optional("delta1", delta1_opt, "attachment shift after the change");
    c.add_optional("tau", tau_opt, "change time");
    c.add_io("out", out_path, "JSON output path");
    c.app()->callback([&, cp = &c] {
      active = cp;
      action = [&]() -> Output {
        const auto g = load_graph(graph_path);
        check_delta(delta0, g.m(), "--delta0");
        check_arg(delta1_opt.has_value() == tau_opt.has_value(),
                  "--delta1 and --tau must be given together");
        auto profile = pacp::DeltaProfile::constant(delta0);
        if (tau_opt) {
          check_delta(*delta1_opt, g.m(), "--delta1");
          check_arg(*tau_opt >= 1 && *tau_opt <= g.n(), "--tau must lie in [1, n]");
          profile = pacp::DeltaProfile::step(delta0, *delta1_opt, *tau_opt);
        }
        const auto ll = pacp::log_likelihood(g, profile);
        Output o;
        o.result["loglik"] = ll.value;
        o.result["log_c"] = ll.log_c;
        o.result["numerator"] = ll.numerator;
        o.result["normalizer"] = ll.normalizer;
        return o;
      };
    });
  }

  // lr
  std::int64_t tau = 0;
  double delta1 = 0.0;
  {
    auto& c = make("lr", "log likelihood ratio of step(delta0, delta1, tau) against constant(delta0)");
    c.add_input("graph", graph_path, "PALOG input")->required();
    c.add("tau", tau, "change time")->required();
    c.add("delta0", delta0, "null shift")->required();
    c.add("delta1", delta1, "post-change shift")->required();
    c.add_io("out", out_path, "JSON output path");
    c.app()->callback([&, cp = &c] {
      active = cp;
      action = [&]() -> Output {
        const auto g = load_graph(graph_path);
        check_delta(delta0, g.m(), "--delta0");
        check_delta(delta1, g.m(), "--delta1");
        check_arg(tau >= 0 && tau <= g.n(), "--tau must lie in [0, n]");
        Output o;
        o.result["log_lr"] = pacp::log_lr_tail(g, tau, delta0, delta1);
        o.result["log_lr_sequential"] = pacp::log_lr_sequential(g, tau, delta0, delta1);
        return o;
      };
    });
  }

  // Campaign flags shared by test, mle and localize.
  std::int64_t replicates = 100;
  std::string mode = "known";
  double level = 0.95;
  bool with_profile = false;
  auto add_campaign_flags = [&](Command& c) {
    c.add_input("graph", graph_path, "PALOG input (single-graph mode)");
    c.add("n", n, "arrivals per replicate (campaign mode)");
    c.add("m", m, "edges per arrival (campaign mode)");
    c.add("replicates", replicates, "campaign replicates");
    c.add("seed", seed, "master seed");
    c.add_threads(threads);
    c.add_io("out", out_path, "JSON output path");
    c.add_io("csv", csv_path, "per-replicate CSV output path");
  };
  auto campaign_spec = [&]() {
    check_arg(n >= 3 && m >= 1, "campaign requires --n >= 3 and --m >= 1");
    check_delta(delta0, m, "--delta0");
    check_delta(delta1, m, "--delta1");
    check_arg(tau >= 2 && tau < n, "--tau must lie in [2, n-1]");
    check_arg(replicates >= 1, "--replicates must be >= 1");
    pacp::CampaignSpec s;
    s.n = n;
    s.m = m;
    s.delta0 = delta0;
    s.delta1 = delta1;
    s.tau = tau;
    s.replicates = replicates;
    s.seed = seed;
    s.threads = pacp::resolve_threads(threads);
    return s;
  };
  pacp::McResult table;

  // test
  {
    auto& c = make("test", "likelihood-ratio test of a change at tau");
    c.add("mode", mode, "known | plugin")->check(CLI::IsMember({"known", "plugin"}));
    c.add("tau", tau, "change time")->required();
    c.add("delta0", delta0, "null shift (used by known mode)");
    c.add("delta1", delta1, "post-change shift (used by known mode)");
    add_campaign_flags(c);
    c.app()->callback([&, cp = &c] {
      active = cp;
      action = [&]() -> Output {
        const auto tm = mode == "known" ? pacp::TestMode::KnownParams : pacp::TestMode::PluginMle;
        Output o;
        if (!graph_path.empty()) {
          const auto g = load_graph(graph_path);
          check_arg(tau >= 0 && tau <= g.n(), "--tau must lie in [0, n]");
          if (tm == pacp::TestMode::KnownParams) {
            check_delta(delta0, g.m(), "--delta0");
            check_delta(delta1, g.m(), "--delta1");
            o.result = verdict_json(pacp::lr_test(g, tau, delta0, delta1));
          } else {
            check_arg(tau >= 2 && tau < g.n(), "plugin mode needs --tau in [2, n-1]");
            try {
              o.result = verdict_json(pacp::plugin_lr_test(g, tau));
            } catch (const pacp::Error& e) {
              if (e.kind() != pacp::ErrorKind::NoInteriorRoot) throw;
              o.result["mode"] = "plugin";
              o.result["verdict"] = "abstain";
              o.result["reason"] = e.what();
            }
          }
          return o;
        }
        table = pacp::test_campaign(campaign_spec(), tm);
        o.seed = seed;
        o.result = campaign_json(table);
        o.result["type1"] = table.aux["type1"];
        o.result["type2"] = table.aux["type2"];
        o.table = &table;
        return o;
      };
    });
  }

  // mle
  {
    auto& c = make("mle", "maximum-likelihood estimates of delta0 and delta1 for a known tau");
    c.add("tau", tau, "change time")->required();
    c.add("level", level, "confidence level for the intervals");
    c.add("delta0", delta0, "true delta0 (campaign mode)");
    c.add("delta1", delta1, "true delta1 (campaign mode)");
    add_campaign_flags(c);
    c.app()->callback([&, cp = &c] {
      active = cp;
      action = [&]() -> Output {
        Output o;
        if (!graph_path.empty()) {
          const auto g = load_graph(graph_path);
          check_arg(tau >= 2 && tau < g.n(), "--tau must lie in [2, n-1]");
          check_arg(level > 0.0 && level < 1.0, "--level must lie in (0, 1)");
          const auto r = pacp::mle(g, tau);
          if (r.pre.status != pacp::MleStatus::Converged) {
            throw pacp::Error(pacp::ErrorKind::NoInteriorRoot,
                              std::string("pre-change window: ") + pacp::mle_status_name(r.pre.status));
          }
          if (r.post.status != pacp::MleStatus::Converged) {
            throw pacp::Error(pacp::ErrorKind::NoInteriorRoot,
                              std::string("post-change window: ") + pacp::mle_status_name(r.post.status));
          }
          o.result["pre"] = root_json(r.pre);
          o.result["post"] = root_json(r.post);
          o.result["pre"]["se"] = r.se0;
          o.result["post"]["se"] = r.se1;
          const auto ci0 = pacp::confidence_interval(r, 0, tau, g.n(), g.m(), level);
          const auto ci1 = pacp::confidence_interval(r, 1, tau, g.n(), g.m(), level);
          o.result["pre"]["ci"] = {ci0.first, ci0.second};
          o.result["post"]["ci"] = {ci1.first, ci1.second};
          return o;
        }
        table = pacp::mle_campaign(campaign_spec());
        o.seed = seed;
        o.result = campaign_json(table);
        o.table = &table;
        return o;
      };
    });
  }

  // localize
  {
    auto& c = make("localize", "locate the change time for known delta0, delta1");
    c.add("delta0", delta0, "pre-change shift")->required();
    c.add("delta1", delta1, "post-change shift")->required();
    c.add("tau", tau, "true change time (campaign mode)");
    c.add_flag("with-profile", with_profile, "include the per-tau log-likelihood profile");
    add_campaign_flags(c);
    c.app()->callback([&, cp = &c] {
      active = cp;
      action = [&]() -> Output {
        Output o;
        if (!graph_path.empty()) {
          const auto g = load_graph(graph_path);
          check_delta(delta0, g.m(), "--delta0");
          check_delta(delta1, g.m(), "--delta1");
          check_arg(delta0 != delta1, "--delta0 and --delta1 must differ");
          const auto loc = pacp::localize_tau(g, delta0, delta1);
          o.result["tau_hat"] = loc.tau_hat;
          o.result["loglik_at_tau_hat"] = loc.profile[static_cast<std::size_t>(loc.tau_hat)];
          if (with_profile) o.result["profile"] = loc.profile;
          return o;
        }
        check_arg(delta0 != delta1, "--delta0 and --delta1 must differ");
        table = pacp::localize_campaign(campaign_spec());
        o.seed = seed;
        o.result = campaign_json(table);
        o.table = &table;
        return o;
      };
    });
  }

  // reduce
  std::int64_t tau_prime = 0;
  double alpha = 1.0;
  {
    auto& c = make("reduce", "bold set, event B_n and exact permuted likelihood ratio of a graph");
    c.add_input("graph", graph_path, "PALOG input")->required();
    c.add("tau", tau, "change time")->required();
    c.add("tau-prime", tau_prime, "reduction cutoff")->required();
    c.add("alpha", alpha, "slack value");
    c.add("delta0", delta0, "null shift")->required();
    c.add("delta1", delta1, "post-change shift")->required();
    c.add_io("out", out_path, "JSON output path");
    c.app()->callback([&, cp = &c] {
      active = cp;
      action = [&]() -> Output {
        const auto g = load_graph(graph_path);
        check_delta(delta0, g.m(), "--delta0");
        check_delta(delta1, g.m(), "--delta1");
        check_arg(tau_prime >= 0 && tau_prime < tau && tau <= g.n(),
                  "requires 0 <= --tau-prime < --tau <= n");
        check_arg(alpha > 0.0, "--alpha must be positive");
        const auto ctx = pacp::make_reduction_context(g, tau, tau_prime, alpha, delta0, delta1);
        Output o;
        o.result["bold"] = ctx.bold.members;
        o.result["bold_size"] = ctx.bold.size();
        o.result["r"] = ctx.r;
        o.result["delta"] = ctx.delta();
        o.result["delta_prime"] = ctx.delta_prime();
        o.result["event_bn"] = pacp::event_Bn(ctx);
        o.result["log_s_ratio"] = ctx.log_s_ratio;
        const double ly = pacp::permuted_lr_log(ctx);
        o.result["log_y"] = ly;
        o.result["y"] = std::exp(ly);
        return o;
      };
    });
  }

  // contiguity
  pacp::ProbeConfig probe;
  std::string probe_kind = "second-moment";
  bool regime = false;
  {
    auto& c = make("contiguity", "Monte Carlo probes of the contiguity ingredients");
    c.add("probe", probe_kind, "second-moment | event-bn | martingale")
        ->check(CLI::IsMember({"second-moment", "event-bn", "martingale"}));
    c.add("n", probe.n, "arrivals per replicate")->required();
    c.add("m", probe.m, "edges per arrival");
    c.add("delta0", probe.delta0, "null shift");
    c.add("delta1", probe.delta1, "post-change shift");
    c.add("tau", probe.tau, "change time (ignored with --regime)");
    c.add("tau-prime", probe.tau_prime, "reduction cutoff (ignored with --regime)");
    c.add("alpha", probe.alpha, "slack value (ignored with --regime)");
    c.add_flag("regime", regime,
               "set Delta = floor(n^(1/3)/log n), Delta' = floor(n^(2/3)), alpha = log n");
    c.add("replicates", probe.replicates, "Monte Carlo replicates");
    c.add("seed", probe.seed, "master seed");
    c.add("c1", probe.c1, "second-moment bound constant c1");
    c.add("c2", probe.c2, "second-moment bound constant c2");
    c.add("C", probe.C, "event-B_n bound constant C");
    c.add("azuma-c", probe.azuma_c, "martingale tail constant (<= 0: default)");
    c.add("x", probe.x_grid, "martingale tail grid");
    c.add_flag("strict", probe.strict, "fail when the second-moment hypotheses do not hold");
    c.add_threads(threads);
    c.add_io("out", out_path, "JSON output path");
    c.add_io("csv", csv_path, "per-replicate CSV output path");
    c.app()->callback([&, cp = &c] {
      active = cp;
      action = [&]() -> Output {
        check_arg(probe.n >= 4 && probe.m >= 1, "requires --n >= 4 and --m >= 1");
        check_delta(probe.delta0, probe.m, "--delta0");
        check_delta(probe.delta1, probe.m, "--delta1");
        check_arg(probe.replicates >= 1, "--replicates must be >= 1");
        if (regime) {
          check_arg(probe.n >= 8, "--regime requires --n >= 8");
          const auto r = pacp::contiguity_regime(probe.n);
          probe.tau = r.tau;
          probe.tau_prime = r.tau_prime;
          probe.alpha = r.alpha;
        }
        check_arg(probe.alpha > 0.0, "--alpha must be positive");
        probe.threads = pacp::resolve_threads(threads);
        if (probe_kind == "second-moment") {
          table = pacp::second_moment_probe(probe);
        } else if (probe_kind == "event-bn") {
          table = pacp::event_bn_failure_probe(probe);
        } else {
          table = pacp::martingale_tail_probe(probe);
        }
        Output o;
        o.seed = probe.seed;
        o.result = campaign_json(table);
        o.result["tau"] = probe.tau;
        o.result["tau_prime"] = probe.tau_prime;
        o.result["alpha"] = probe.alpha;
        o.table = &table;
        return o;
      };
    });
  }

  // theory
  std::int64_t kmax = 20;
  std::optional<std::int64_t> moment_u;
  std::optional<std::int64_t> moment_t;
  {
    auto& c = make("theory", "limiting degree law, rates, variances and degree moments");
    c.add("m", m, "edges per arrival");
    c.add("delta0", delta0, "pre-change shift");
    c.add_optional("delta1", delta1_opt, "post-change shift");
    c.add("kmax", kmax, "largest degree listed");
    c.add_optional("u", moment_u, "vertex for the degree moments");
    c.add_optional("t", moment_t, "time for the degree moments");
    c.add_io("out", out_path, "JSON output path");
    c.app()->callback([&, cp = &c] {
      active = cp;
      action = [&]() -> Output {
        check_arg(m >= 1, "--m must be >= 1");
        check_delta(delta0, m, "--delta0");
        check_arg(kmax >= m, "--kmax must be >= m");
        check_arg(moment_u.has_value() == moment_t.has_value(), "--u and --t go together");
        Output o;
        const pacp::DegreeLaw law(m, delta0);
        json p = json::object();
        json tail = json::object();
        for (std::int64_t k = m; k <= kmax; ++k) {
          p[std::to_string(k)] = law.pmf(k);
          tail[std::to_string(k)] = law.tail(k);
        }
        o.result["p"] = p;
        o.result["tail"] = tail;
        o.result["mean"] = pacp::degree_law_mean(m, delta0).value;
        if (delta1_opt) {
          check_delta(*delta1_opt, m, "--delta1");
          const double d1 = *delta1_opt;
          auto series = [](const pacp::SeriesValue& s) {
            json j;
            j["value"] = s.value;
            j["remainder_bound"] = s.remainder_bound;
            j["terms"] = s.terms;
            return j;
          };
          if (d1 != delta0) {
            const auto l0 = pacp::limit_loglr_rate(delta0, d1, m, pacp::Hypothesis::H0);
            const auto l1 = pacp::limit_loglr_rate(delta0, d1, m, pacp::Hypothesis::H1);
            o.result["ell_inf_0"] = l0.value;
            o.result["ell_inf_1"] = l1.value;
            o.result["ell_inf_0_series"] = series(l0);
            o.result["ell_inf_1_series"] = series(l1);
          }
          o.result["nu0"] = pacp::asymptotic_variance(0, delta0, d1, m).value;
          o.result["nu1"] = pacp::asymptotic_variance(1, delta0, d1, m).value;
        }
        if (moment_u) {
          check_arg(*moment_t >= std::max<std::int64_t>(1, *moment_u), "--t must be >= max(1, u)");
          const auto mc = pacp::degree_moment(*moment_u, *moment_t, m, delta0);
          o.result["moments"] = {{"xi", mc.xi},
                                 {"kappa", mc.kappa},
                                 {"mean_degree", mc.mean - delta0},
                                 {"mean_shifted", mc.mean},
                                 {"second_moment_shifted", mc.second_moment}};
        }
        return o;
      };
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    json err;
    err["version"] = kVersion;
    err["schema"] = kSchema;
    err["error"] = {{"kind", "BadArguments"}, {"message", e.what()}};
    std::cout << err.dump(2) << '\n';
    std::cerr << "pacp: " << e.what() << '\n';
    return kExitBadArgs;
  }

  json doc;
  doc["version"] = kVersion;
  doc["schema"] = kSchema;
  doc["command"] = active ? active->name() : "";
  auto fail = [&](const std::string& kind, const std::string& msg, int code) {
    doc["config_echo"] = active ? active->echo() : json::object();
    doc["error"] = {{"kind", kind}, {"message", msg}};
    std::cout << doc.dump(2) << '\n';
    std::cerr << "pacp: " << kind << ": " << msg << '\n';
    return code;
  };
  try {
    Output o = action();
    doc["seed"] = o.seed ? json(*o.seed) : json(nullptr);
    doc["config_echo"] = active->echo();
    doc["result"] = std::move(o.result);
    if (o.table && !csv_path.empty()) write_text(csv_path, o.table->csv());
    const std::string text = doc.dump(2) + "\n";
    if (out_path.empty()) {
      std::cout << text;
    } else {
      write_text(out_path, text);
    }
    return kExitOk;
  } catch (const BadArgs& e) {
    return fail(e.kind, e.what(), kExitBadArgs);
  } catch (const pacp::Error& e) {
    return fail(e.kind_name(), e.what(), kExitDomain);
  } catch (const std::exception& e) {
    return fail("IoError", e.what(), kExitBadArgs);
  }
}
