// courant-tdual: exact T-duality engine for standard Courant algebroids over
// principal torus bundles. Loads JSON data documents, runs the structural
// checks, constructs T-duals, applies the spinor-level maps, and emits
// machine-readable reports.
//
// Exit codes: 0 ok, 1 parse error, 2 residual failure, 3 integrality
// failure, 4 unsupported lift.

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include "ctd/errors.hpp"
#include "ctd/examples.hpp"
#include "ctd/json_io.hpp"
#include "ctd/tdual.hpp"

namespace {

using ctd::io::Json;

constexpr int kExitOk = 0;
constexpr int kExitParse = 1;
constexpr int kExitResidual = 2;
constexpr int kExitIntegrality = 3;
constexpr int kExitUnsupportedLift = 4;

int threadBudget() {
  if (const char* env = std::getenv("COURANT_TDUAL_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

/// Runs independent residual evaluations in parallel, capped by
/// COURANT_TDUAL_THREADS. Tasks touch only immutable shared data.
void runParallel(std::vector<std::function<void()>> tasks) {
  int budget = std::min<int>(threadBudget(), static_cast<int>(tasks.size()));
  if (budget <= 1) {
    for (auto& t : tasks) t();
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<size_t> next{0};
  for (int i = 0; i < budget; ++i)
    pool.emplace_back([&] {
      for (size_t idx = next.fetch_add(1); idx < tasks.size();
           idx = next.fetch_add(1))
        tasks[idx]();
    });
  for (auto& t : pool) t.join();
}

std::string readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ctd::ParseError("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Json parseFile(const std::string& path) {
  try {
    return Json::parse(readFile(path));
  } catch (const nlohmann::json::exception& e) {
    throw ctd::ParseError(std::string("bad JSON: ") + e.what());
  }
}

void writeOut(const Json& doc, const std::string& path) {
  std::string text = doc.dump(2) + "\n";
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
}

class Stopwatch {
public:
  void lap(const std::string& name) {
    auto now = std::chrono::steady_clock::now();
    double ms = std::chrono::duration<double, std::milli>(now - m_last).count();
    m_laps.push_back({name, ms});
    m_last = now;
  }
  Json toJson() const {
    Json out;
    for (const auto& [name, ms] : m_laps) out[name + "Ms"] = ms;
    return out;
  }

private:
  std::chrono::steady_clock::time_point m_last = std::chrono::steady_clock::now();
  std::vector<std::pair<std::string, double>> m_laps;
};

Json makeReport(const std::string& command, const std::string& inputBytes,
                const ctd::ResidualReport& residuals, const Stopwatch& watch,
                int exitStatus, bool withFloat) {
  Json out;
  out["command"] = command;
  out["inputDigest"] = ctd::io::digest(inputBytes);
  out["residuals"] = ctd::io::toJson(residuals, withFloat);
  out["timings"] = watch.toJson();
  out["exitStatus"] = exitStatus;
  return out;
}

ctd::ResidualReport merged(std::vector<ctd::ResidualReport> reports) {
  ctd::ResidualReport out;
  for (auto& r : reports)
    for (auto& item : r.items) out.items.push_back(std::move(item));
  return out;
}

/// checkCompatibility and checkActionCompat with the independent residual
/// groups evaluated in parallel.
ctd::ResidualReport fullCheck(const ctd::CourantData& data) {
  std::vector<ctd::ResidualReport> parts(2);
  runParallel({[&] { parts[0] = ctd::checkCompatibility(data); },
               [&] { parts[1] = ctd::checkActionCompat(data); }});
  return merged(std::move(parts));
}

std::vector<ctd::RVec> parseRTilde(const std::string& path, const ctd::CourantData& data) {
  std::vector<ctd::RVec> rt(static_cast<size_t>(data.fiberCount()),
                            ctd::RVec(static_cast<size_t>(data.n()), ctd::Rational(0)));
  if (path.empty()) return rt;
  Json j = parseFile(path);
  rt.clear();
  for (const auto& row : j) {
    ctd::RVec v;
    for (const auto& x : row) v.push_back(ctd::parseRational(x.get<std::string>()));
    rt.push_back(std::move(v));
  }
  return rt;
}

int runDemo(const std::string& name, const std::string& outPath, bool withFloat,
            uint64_t seed) {
  Stopwatch watch;
  ctd::CourantData data = ctd::examples::byName(name);
  watch.lap("build");
  ctd::ResidualReport checks = fullCheck(data);
  watch.lap("check");
  ctd::DualityPackage pkg =
      ctd::dualize(data, std::vector<ctd::RVec>(
                             static_cast<size_t>(data.fiberCount()),
                             ctd::RVec(static_cast<size_t>(data.n()), ctd::Rational(0))));
  watch.lap("dualize");
  ctd::ResidualReport duality = verifyDuality(pkg);
  watch.lap("verify");

  // randomized sweeps: rho preserves products/brackets, tau intertwines
  std::mt19937_64 rng(seed);
  auto randTrig = [&](int m) {
    std::uniform_int_distribution<int> d(-2, 2);
    ctd::TrigScalar f(m);
    ctd::TrigScalar::Freq k(static_cast<size_t>(m), 0);
    for (int i = 0; i < m; ++i) k[static_cast<size_t>(i)] = d(rng) % 2;
    f.addMode(k, ctd::TauPoly(ctd::Rational(d(rng))), ctd::TauPoly(ctd::Rational(d(rng))));
    return f;
  };
  auto randSection = [&](const ctd::CourantData& d2) {
    ctd::Section s = ctd::Section::zero(d2.sig(), d2.n());
    std::uniform_int_distribution<int> pick(0, d2.sig()->totalGens() - 1);
    s.xi.addTerm(1u << pick(rng), randTrig(d2.baseDim()));
    for (auto& x : s.r) x = randTrig(d2.baseDim());
    for (auto& x : s.vec) x = randTrig(d2.baseDim());
    return s;
  };
  ctd::Residual sweep{"tau-rho-sweep", {}};
  for (int t = 0; t < 10; ++t) {
    ctd::Section u = randSection(data);
    ctd::Section v = randSection(data);
    ctd::Section ru = rho(pkg, u);
    ctd::Section rv = rho(pkg, v);
    ctd::TrigScalar pd = data.pair(u, v) - pkg.dual.pair(ru, rv);
    if (!pd.isZero())
      sweep.forms.push_back(ctd::InvariantForm::scalar(data.sig(), pd));
    ctd::Section bd = ctd::sectionSub(rho(pkg, dorfman(data, u, v)),
                                      dorfman(pkg.dual, ru, rv));
    if (!ctd::sectionIsZero(bd))
      sweep.forms.push_back(ctd::InvariantForm::scalar(data.sig(), ctd::Rational(1)));
    ctd::InvariantSpinor s(data.sig(), data.fockPtr());
    std::uniform_int_distribution<int> pickF(0, data.fock().dim() - 1);
    std::uniform_int_distribution<int> pickS(0, (1 << data.sig()->totalGens()) - 1);
    s.addTerm(static_cast<uint32_t>(pickS(rng)), static_cast<uint32_t>(pickF(rng)),
              randTrig(data.baseDim()));
    ctd::InvariantSpinor diff =
        tau(pkg, dirac(data, s)) - dirac(pkg.dual, tau(pkg, s));
    if (!diff.isZero())
      sweep.forms.push_back(ctd::InvariantForm::scalar(data.sig(), ctd::Rational(1)));
  }
  watch.lap("sweep");

  ctd::ResidualReport all = merged({checks, duality});
  all.items.push_back(std::move(sweep));
  int status = all.allZero() ? kExitOk : kExitResidual;
  Json report = makeReport("demo " + name, name, all, watch, status, withFloat);
  report["package"] = ctd::io::toJson(pkg, withFloat);
  writeOut(report, outPath);
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact T-duality engine for transitive Courant algebroids over torus bundles"};
  app.require_subcommand(1);

  std::string inputPath, outputPath, spinorPath, sectionPath, rtildePath;
  bool withFloat = false;
  uint64_t seed = 0;
  app.add_flag("--float", withFloat,
               "add decimal approximations (human reading only)");
  app.add_option("--seed", seed, "seed for randomized property sweeps");

  auto addIo = [&](CLI::App* cmd, bool needInput = true) {
    if (needInput)
      cmd->add_option("--input", inputPath, "input JSON document")->required();
    cmd->add_option("--output", outputPath, "output path (stdout when absent)");
  };

  CLI::App* check = app.add_subcommand("check", "structural + action compatibility checks");
  addIo(check);
  CLI::App* decompose = app.add_subcommand("decompose", "theta-degree decomposition and its equations");
  addIo(decompose);
  CLI::App* dualizeCmd = app.add_subcommand("dualize", "construct the T-dual package");
  addIo(dualizeCmd);
  dualizeCmd->add_option("--rtilde", rtildePath, "JSON matrix of dual sections r~_i");
  CLI::App* verify = app.add_subcommand("verify", "verify a duality package");
  addIo(verify);
  CLI::App* diracCmd = app.add_subcommand("dirac", "apply the canonical Dirac operator to a spinor");
  addIo(diracCmd);
  diracCmd->add_option("--spinor", spinorPath, "spinor JSON document")->required();
  CLI::App* tauCmd = app.add_subcommand("tau", "apply the duality spinor map");
  addIo(tauCmd);
  tauCmd->add_option("--spinor", spinorPath, "spinor JSON document")->required();
  CLI::App* rhoCmd = app.add_subcommand("rho", "apply the duality section map");
  addIo(rhoCmd);
  rhoCmd->add_option("--section", sectionPath, "section JSON document")->required();
  CLI::App* demo = app.add_subcommand("demo", "run a named built-in example end to end");
  std::string demoName;
  demo->add_option("name", demoName, "trivial | exact-flux-<n> | heisenberg | affine-so3")
      ->required();
  demo->add_option("--output", outputPath, "output path (stdout when absent)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (demo->parsed()) return runDemo(demoName, outputPath, withFloat, seed);

    std::string inputBytes = readFile(inputPath);
    Json inputDoc = Json::parse(inputBytes);
    Stopwatch watch;

    if (check->parsed()) {
      ctd::CourantData data = ctd::io::courantFromJson(inputDoc);
      watch.lap("load");
      ctd::ResidualReport rep = fullCheck(data);
      watch.lap("check");
      int status = rep.allZero() ? kExitOk : kExitResidual;
      writeOut(makeReport("check", inputBytes, rep, watch, status, withFloat),
               outputPath);
      return status;
    }
    if (decompose->parsed()) {
      ctd::CourantData data = ctd::io::courantFromJson(inputDoc);
      watch.lap("load");
      ctd::HRDecomposition d = ctd::decomposeHR(data);
      ctd::ResidualReport rep = ctd::checkDecompEquations(d);
      watch.lap("decompose");
      int status = rep.allZero() ? kExitOk : kExitResidual;
      Json report =
          makeReport("decompose", inputBytes, rep, watch, status, withFloat);
      Json pieces;
      pieces["H3"] = ctd::io::termsToJson(d.H3, withFloat);
      Json h2 = Json::array();
      for (const auto& f : d.H2) h2.push_back(ctd::io::termsToJson(f, withFloat));
      pieces["H2"] = std::move(h2);
      report["decomposition"] = std::move(pieces);
      writeOut(report, outputPath);
      return status;
    }
    if (dualizeCmd->parsed()) {
      ctd::CourantData data = ctd::io::courantFromJson(inputDoc);
      watch.lap("load");
      ctd::DualityPackage pkg = ctd::dualize(data, parseRTilde(rtildePath, data));
      watch.lap("dualize");
      writeOut(ctd::io::toJson(pkg, withFloat), outputPath);
      return kExitOk;
    }
    if (verify->parsed()) {
      ctd::DualityPackage pkg = ctd::io::packageFromJson(inputDoc);
      watch.lap("load");
      std::vector<ctd::ResidualReport> parts(3);
      runParallel({[&] { parts[0] = ctd::verifyDuality(pkg); },
                   [&] { parts[1] = ctd::checkCompatibility(pkg.dual); },
                   [&] { parts[2] = ctd::checkActionCompat(pkg.dual); }});
      ctd::ResidualReport rep = merged(std::move(parts));
      watch.lap("verify");
      int status = rep.allZero() ? kExitOk : kExitResidual;
      writeOut(makeReport("verify", inputBytes, rep, watch, status, withFloat),
               outputPath);
      return status;
    }
    if (diracCmd->parsed()) {
      ctd::CourantData data = ctd::io::courantFromJson(inputDoc);
      ctd::InvariantSpinor s = ctd::io::spinorFromJson(parseFile(spinorPath), data);
      watch.lap("load");
      ctd::InvariantSpinor out = ctd::dirac(data, s);
      watch.lap("dirac");
      writeOut(ctd::io::toJson(out, withFloat), outputPath);
      return kExitOk;
    }
    if (tauCmd->parsed()) {
      ctd::DualityPackage pkg = ctd::io::packageFromJson(inputDoc);
      ctd::InvariantSpinor s =
          ctd::io::spinorFromJson(parseFile(spinorPath), pkg.source);
      watch.lap("load");
      ctd::InvariantSpinor out = ctd::tau(pkg, s);
      watch.lap("tau");
      writeOut(ctd::io::toJson(out, withFloat), outputPath);
      return kExitOk;
    }
    if (rhoCmd->parsed()) {
      ctd::DualityPackage pkg = ctd::io::packageFromJson(inputDoc);
      ctd::Section u = ctd::io::sectionFromJson(parseFile(sectionPath), pkg.source);
      watch.lap("load");
      ctd::Section out = ctd::rho(pkg, u);
      watch.lap("rho");
      writeOut(ctd::io::toJson(out, pkg.dual.sig(), withFloat), outputPath);
      return kExitOk;
    }
  } catch (const ctd::NotIntegral& e) {
    std::cerr << e.what() << "\n";
    return kExitIntegrality;
  } catch (const ctd::UnsupportedK& e) {
    std::cerr << e.what() << "\n";
    return kExitUnsupportedLift;
  } catch (const ctd::NotNilpotent& e) {
    std::cerr << e.what() << "\n";
    return kExitUnsupportedLift;
  } catch (const ctd::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitParse;
  } catch (const ctd::Error& e) {
    std::cerr << e.what() << "\n";
    return kExitResidual;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitParse;
  }
  return kExitOk;
}
