#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "locality/adversary.hpp"
#include "locality/analysis.hpp"
#include "locality/io.hpp"
#include "locality/report.hpp"

namespace {

using namespace locality;
using report::Json;

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

// Usage and input-format problems; mapped to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void print_error(const std::string& message) {
  const bool color = std::getenv("NO_COLOR") == nullptr && isatty(STDERR_FILENO);
  std::cerr << (color ? "\033[1;31merror:\033[0m " : "error: ") << message << "\n";
}

int emit(const Json& doc) {
  std::cout << report::dump(doc);
  std::cout.flush();
  if (doc.contains("pass") && !doc["pass"].get<bool>()) return kFailed;
  return kOk;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  return in;
}

std::vector<std::string> split_list(const std::string& list) {
  std::vector<std::string> out;
  std::stringstream ss(list);
  for (std::string item; std::getline(ss, item, ',');) {
    if (item.empty()) throw UsageError("empty entry in list '" + list + "'");
    out.push_back(item);
  }
  return out;
}

Json function_json(const std::string& spec, const WorkingSetFunction& f) {
  return {{"spec", spec}, {"description", f.describe()}};
}

struct SimulateArgs {
  std::string policy;
  std::size_t k = 0;
  std::string warm;
  std::string trace;
  bool detail = false;
  std::size_t warmup = 0;
};

int cmd_simulate(const SimulateArgs& a) {
  const PolicyKind kind = parse_policy(a.policy);
  io::TokenTable tokens;
  CacheConfig config = CacheConfig::cold(a.k);
  Json warm_echo = nullptr;
  if (!a.warm.empty()) {
    const auto names = split_list(a.warm);
    std::vector<PageId> pages;
    for (const auto& n : names) pages.push_back(tokens.intern(n));
    config = CacheConfig::warm_start(pages);
    config.k = a.k;
    warm_echo = names;
  }
  auto in = open_input(a.trace);
  const PageSequence seq = io::read_trace(in, tokens, a.trace);
  const auto result = run(kind, config, seq, {.detail = a.detail, .warmup = a.warmup});
  const Json inputs{{"policy", policy_name(kind)}, {"k", a.k},          {"warm", warm_echo},
                    {"trace", a.trace},            {"detail", a.detail}, {"warmup", a.warmup}};
  return emit(report::document("simulate", inputs, report::to_json(result, &tokens)));
}

struct AdversaryArgs {
  std::string policy;
  std::string f;
  std::size_t k = 0;
  std::size_t reps = 1;
  std::string out;
};

int cmd_adversary(const AdversaryArgs& a) {
  const PolicyKind kind = parse_policy(a.policy);
  const auto f = io::parse_function_spec(a.f);
  const auto adv = afg_lower_bound(kind, f, a.k, a.reps);
  const auto replayed = run(kind, CacheConfig::warm_range(a.k), adv.sequence);
  const Rational target = alpha(f, a.k);
  const bool conforming = conforms(adv.sequence, f).conforms;
  const bool pass = replayed.faults == adv.predicted_faults && replayed.fault_rate() == target && conforming;

  Json results{{"target_policy", adv.target_policy},
               {"length", adv.sequence.size()},
               {"predicted_faults", adv.predicted_faults},
               {"observed_faults", replayed.faults},
               {"alpha", report::rational(target)},
               {"alpha_float", target.to_double()},
               {"rate", report::rational(replayed.fault_rate())},
               {"rate_float", replayed.fault_rate().to_double()},
               {"conforms", conforming},
               {"universe", adv.universe}};
  if (a.out.empty()) {
    results["sequence"] = adv.sequence;
  } else {
    std::ofstream out(a.out);
    if (!out) throw UsageError("cannot write " + a.out);
    io::write_trace(out, adv.sequence);
    results["trace"] = a.out;
  }
  const Json inputs{{"policy", policy_name(kind)}, {"f", function_json(a.f, f)}, {"k", a.k},
                    {"reps", a.reps}};
  return emit(report::document("adversary", inputs, results, pass));
}

int cmd_bounds(const std::string& spec, std::size_t k) {
  const auto f = io::parse_function_spec(spec);
  const Rational a = alpha(f, k);
  const Rational b = fifo_bound(f, k);
  const Json results{{"alpha", report::rational(a)},
                     {"alpha_float", a.to_double()},
                     {"fifo_bound", report::rational(b)},
                     {"fifo_bound_float", b.to_double()},
                     {"inverse_k_plus_1", f.inverse(k + 1)}};
  return emit(report::document("bounds", {{"f", function_json(spec, f)}, {"k", k}}, results));
}

int cmd_conform(const std::string& spec, const std::string& trace, bool naive) {
  const auto f = io::parse_function_spec(spec);
  const auto t = io::read_trace_file(trace);
  const auto r = naive ? conforms_naive(t.pages, f) : conforms(t.pages, f);
  const Json inputs{{"f", function_json(spec, f)}, {"trace", trace}, {"naive", naive}};
  return emit(report::document("conform", inputs, report::to_json(r), r.conforms));
}

int cmd_profile(const std::string& trace, std::size_t max_window, bool serial) {
  const auto t = io::read_trace_file(trace);
  if (t.pages.empty()) throw UsageError(trace + ": empty trace");
  const std::size_t w = max_window == 0 ? t.pages.size() : max_window;
  if (w > t.pages.size()) throw UsageError("--max-window exceeds trace length");
  const auto g = serial ? empirical_profile(t.pages, w) : empirical_profile_parallel(t.pages, w);
  const Json inputs{{"trace", trace}, {"max_window", w}};
  const Json results{{"length", t.pages.size()}, {"distinct", t.tokens.size()}, {"profile", g}};
  return emit(report::document("profile", inputs, results));
}

struct VerifyArgs {
  std::string f = "sqrt";
  std::string policy = "lru";
  std::size_t k = 4;
  std::size_t reps = 10;
  TrialParams params;
  bool serial = false;
};

Json trial_inputs(const VerifyArgs& a, const WorkingSetFunction& f) {
  return {{"f", function_json(a.f, f)}, {"k", a.k},     {"trials", a.params.trials},
          {"len", a.params.length},     {"pages", a.params.num_pages == 0 ? a.k + 1 : a.params.num_pages},
          {"seed", a.params.seed}};
}

int cmd_verify_lower(const VerifyArgs& a) {
  const auto f = io::parse_function_spec(a.f);
  const PolicyKind kind = parse_policy(a.policy);
  const auto r = verify_lower_bound(kind, f, a.k, a.reps);
  const Json inputs{{"f", function_json(a.f, f)}, {"k", a.k}, {"policy", policy_name(kind)}, {"reps", a.reps}};
  return emit(report::document("verify lower", inputs, report::to_json(r), r.pass));
}

int cmd_verify_upper(const VerifyArgs& a, bool fifo) {
  const auto f = io::parse_function_spec(a.f);
  const Execution exec = a.serial ? Execution::Serial : Execution::Parallel;
  const auto r = fifo ? verify_fifo_upper(f, a.k, a.params, exec) : verify_lru_upper(f, a.k, a.params, exec);
  return emit(report::document(fifo ? "verify fifo-upper" : "verify lru-upper", trial_inputs(a, f),
                               report::to_json(r), r.pass));
}

int cmd_verify_separation(std::size_t reps) {
  const auto r = separation_demo(reps);
  return emit(report::document("verify separation", {{"reps", reps}}, report::to_json(r), r.pass));
}

int cmd_knapsack(const std::string& path, bool exact_mode) {
  auto in = open_input(path);
  const auto inst = io::read_knapsack(in, path);
  const auto sol = exact_mode ? knapsack::exact(inst) : knapsack::greedy(inst);
  Json results = report::to_json(sol);
  results["alpha"] = knapsack::alpha(inst);
  return emit(report::document(exact_mode ? "knapsack exact" : "knapsack greedy",
                               {{"instance", path}, {"capacity", inst.capacity}, {"n", inst.items.size()}},
                               results));
}

struct GenArgs {
  std::size_t d = 2;
  std::size_t n = 50;
  double mu = 0.1;
  std::uint64_t seed = 1;
  std::string out;
};

int cmd_perceptron_gen(const GenArgs& a) {
  if (!(a.mu > 0 && a.mu < 1)) throw UsageError("--mu must lie in (0, 1)");
  const auto data = perceptron::margin_dataset(a.d, a.n, a.mu, a.seed);
  std::ofstream out(a.out);
  if (!out) throw UsageError("cannot write " + a.out);
  io::write_perceptron(out, data);
  const Json inputs{{"d", a.d}, {"n", a.n}, {"mu", a.mu}, {"seed", a.seed}, {"out", a.out}};
  const Json results{{"w_star", data.witness->w_star},
                     {"margin", perceptron::margin_lower_bound(data, data.witness->w_star)},
                     {"points", data.points.size()}};
  return emit(report::document("perceptron gen", inputs, results));
}

int cmd_perceptron_train(const std::string& path, std::size_t max_updates, std::optional<double> mu) {
  auto in = open_input(path);
  const auto data = io::read_perceptron(in, path);
  const auto t = perceptron::train(data, max_updates);
  Json results = report::to_json(t);
  bool pass = t.converged;
  Json inputs{{"data", path}, {"max_updates", max_updates}, {"mu", nullptr}};
  if (mu) {
    if (!(*mu > 0 && *mu <= 1)) throw UsageError("--mu must lie in (0, 1]");
    const auto bound = static_cast<std::size_t>(std::ceil(1.0 / (*mu * *mu)));
    results["update_bound"] = bound;
    pass = pass && t.updates <= bound;
    inputs["mu"] = *mu;
  }
  return emit(report::document("perceptron train", inputs, results, pass));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Paging policies under working-set locality models"};
  app.require_subcommand(1);
  std::function<int()> action;

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Replay a trace through one policy");
  simulate->add_option("--policy", sim.policy, "lru, fifo or opt")->required();
  simulate->add_option("--k", sim.k, "Cache size")->required();
  simulate->add_option("--warm", sim.warm, "Comma-separated initial cache contents");
  simulate->add_option("--trace", sim.trace, "Trace file")->required();
  simulate->add_flag("--detail", sim.detail, "Record fault indices and evictions");
  simulate->add_option("--warmup", sim.warmup, "Requests excluded from the steady-state rate");
  simulate->callback([&] { action = [&] { return cmd_simulate(sim); }; });

  AdversaryArgs adv;
  auto* adversary = app.add_subcommand("adversary", "Generate the lower-bound sequence for a policy");
  adversary->add_option("--policy", adv.policy, "lru or fifo")->required();
  adversary->add_option("--f", adv.f, "identity, sqrt, log2 or table:PATH")->required();
  adversary->add_option("--k", adv.k, "Cache size")->required();
  adversary->add_option("--reps", adv.reps, "Repetitions of the construction");
  adversary->add_option("--out", adv.out, "Write the sequence as a trace file");
  adversary->callback([&] { action = [&] { return cmd_adversary(adv); }; });

  std::string f_spec;
  std::size_t k = 0;
  auto* bounds = app.add_subcommand("bounds", "Print alpha and the FIFO bound");
  bounds->add_option("--f", f_spec, "identity, sqrt, log2 or table:PATH")->required();
  bounds->add_option("--k", k, "Cache size")->required();
  bounds->callback([&] { action = [&] { return cmd_bounds(f_spec, k); }; });

  std::string trace;
  bool naive = false;
  auto* conform = app.add_subcommand("conform", "Check a trace against a working-set function");
  conform->add_option("--f", f_spec, "identity, sqrt, log2 or table:PATH")->required();
  conform->add_option("--trace", trace, "Trace file")->required();
  conform->add_flag("--naive", naive, "Use the all-windows reference checker");
  conform->callback([&] { action = [&] { return cmd_conform(f_spec, trace, naive); }; });

  std::size_t max_window = 0;
  bool serial = false;
  auto* profile = app.add_subcommand("profile", "Empirical working-set profile of a trace");
  profile->add_option("--trace", trace, "Trace file")->required();
  profile->add_option("--max-window", max_window, "Largest window length (default: trace length)");
  profile->add_flag("--serial", serial, "Use the serial kernel");
  profile->callback([&] { action = [&] { return cmd_profile(trace, max_window, serial); }; });

  VerifyArgs ver;
  auto* verify = app.add_subcommand("verify", "Check measured fault rates against the bounds");
  verify->require_subcommand(1);
  auto add_trial_options = [&](CLI::App* cmd) {
    cmd->add_option("--f", ver.f, "identity, sqrt, log2 or table:PATH");
    cmd->add_option("--k", ver.k, "Cache size");
    cmd->add_option("--trials", ver.params.trials, "Number of random sequences");
    cmd->add_option("--len", ver.params.length, "Requests per sequence");
    cmd->add_option("--pages", ver.params.num_pages, "Distinct pages (default k+1)");
    cmd->add_option("--seed", ver.params.seed, "Base seed");
    cmd->add_flag("--serial", ver.serial, "Run trials on one thread");
  };
  auto* lower = verify->add_subcommand("lower", "Exact rate of the lower-bound construction");
  lower->add_option("--policy", ver.policy, "lru or fifo");
  lower->add_option("--f", ver.f, "identity, sqrt, log2 or table:PATH");
  lower->add_option("--k", ver.k, "Cache size");
  lower->add_option("--reps", ver.reps, "Repetitions");
  lower->callback([&] { action = [&] { return cmd_verify_lower(ver); }; });
  auto* lru_upper = verify->add_subcommand("lru-upper", "LRU against alpha on random conforming input");
  add_trial_options(lru_upper);
  lru_upper->callback([&] { action = [&] { return cmd_verify_upper(ver, false); }; });
  auto* fifo_upper = verify->add_subcommand("fifo-upper", "FIFO against its bound on random conforming input");
  add_trial_options(fifo_upper);
  fifo_upper->callback([&] { action = [&] { return cmd_verify_upper(ver, true); }; });
  std::size_t sep_reps = 100;
  auto* separation = verify->add_subcommand("separation", "FIFO and LRU on the repeated witness block");
  separation->add_option("--reps", sep_reps, "Repetitions of the block");
  separation->callback([&] { action = [&] { return cmd_verify_separation(sep_reps); }; });

  std::string instance;
  auto* knap = app.add_subcommand("knapsack", "Greedy or exact knapsack");
  knap->require_subcommand(1);
  auto* greedy = knap->add_subcommand("greedy", "Density-ordered prefix");
  greedy->add_option("--instance", instance, "Instance file")->required();
  greedy->callback([&] { action = [&] { return cmd_knapsack(instance, false); }; });
  auto* exact = knap->add_subcommand("exact", "Optimal selection");
  exact->add_option("--instance", instance, "Instance file")->required();
  exact->callback([&] { action = [&] { return cmd_knapsack(instance, true); }; });

  GenArgs gen;
  std::string data;
  std::size_t max_updates = 1'000'000;
  std::optional<double> mu;
  auto* perc = app.add_subcommand("perceptron", "Margin datasets and perceptron training");
  perc->require_subcommand(1);
  auto* perc_gen = perc->add_subcommand("gen", "Sample a dataset with a known margin");
  perc_gen->add_option("--d", gen.d, "Dimension");
  perc_gen->add_option("--n", gen.n, "Number of points");
  perc_gen->add_option("--mu", gen.mu, "Margin");
  perc_gen->add_option("--seed", gen.seed, "Seed");
  perc_gen->add_option("--out", gen.out, "Dataset file")->required();
  perc_gen->callback([&] { action = [&] { return cmd_perceptron_gen(gen); }; });
  auto* perc_train = perc->add_subcommand("train", "Run the perceptron to convergence");
  perc_train->add_option("--data", data, "Dataset file")->required();
  perc_train->add_option("--max-updates", max_updates, "Update budget");
  perc_train->add_option("--mu", mu, "Claimed margin; checks updates <= ceil(1/mu^2)");
  perc_train->callback([&] { action = [&] { return cmd_perceptron_train(data, max_updates, mu); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error(e.what());
    return kUsage;
  }

  try {
    return action();
  } catch (const UsageError& e) {
    print_error(e.what());
  } catch (const io::FormatError& e) {
    print_error(e.what());
  } catch (const FunctionError& e) {
    print_error(e.what());
  } catch (const PolicyError& e) {
    print_error(e.what());
  } catch (const AdversaryError& e) {
    print_error(e.what());
  } catch (const knapsack::TooLarge& e) {
    print_error(e.what());
  } catch (const std::invalid_argument& e) {
    print_error(e.what());
  } catch (const std::exception& e) {
    print_error(e.what());
  }
  return kUsage;
}
