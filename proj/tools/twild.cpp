// twild: analysis, diagrams and axiom verification for twisted wild character varieties.
//
// Exit codes: 0 pass, 1 verification failure, 2 input error.

#include <chrono>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "twild/diagram.hpp"
#include "twild/serialize.hpp"
#include "twild/verify.hpp"

using namespace twild;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kInputError = 2;

struct Common {
  std::string input;
  std::string preset;
  std::string out;
};

void emit(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(out);
  if (!f) throw ParseError(out, "cannot write output file");
  f << text;
}

IrregularClass load_class(const Common& c) {
  if (!c.input.empty() && !c.preset.empty()) throw ParseError("arguments", "give either --input or --preset");
  if (!c.input.empty()) return class_from_json(read_json_file(c.input));
  if (!c.preset.empty()) return load_preset(c.preset);
  throw ParseError("arguments", "one of --input or --preset is required");
}

std::string class_descriptor(const Common& c) {
  if (!c.input.empty()) return "file:" + c.input;
  if (!c.preset.empty()) return c.preset;
  throw ParseError("arguments", "one of --input, --preset or --model is required");
}

void add_source(CLI::App* cmd, Common& c) {
  cmd->add_option("--input", c.input, "irregular class JSON file");
  cmd->add_option("--preset", c.preset, "preset name, e.g. airy or \"p1h n=2 k=3\"");
  cmd->add_option("--out", c.out, "output path (default stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"twild: Stokes data, twisted fission spaces and quasi-Hamiltonian checks"};
  app.require_subcommand(1);

  Common analyze_opts;
  auto* analyze_cmd = app.add_subcommand("analyze", "report circles, adjoint cover, singular directions and H(d)");
  add_source(analyze_cmd, analyze_opts);

  Common diagram_opts;
  std::string format = "svg";
  int samples = 360;
  auto* diagram_cmd = app.add_subcommand("diagram", "Stokes diagram as SVG or JSON polylines");
  add_source(diagram_cmd, diagram_opts);
  diagram_cmd->add_option("--format", format, "svg or json")->check(CLI::IsMember({"svg", "json"}));
  diagram_cmd->add_option("--samples", samples, "points per turn")->check(CLI::Range(16, 100000));

  Common verify_opts;
  std::string model;
  VerifyOptions vo;
  double tol = -1;
  bool corrupt = false;
  std::uint64_t base_seed = 0;
  auto* verify_cmd = app.add_subcommand("verify", "seeded sweep of the quasi-Hamiltonian axiom suite");
  add_source(verify_cmd, verify_opts);
  verify_cmd->add_option("--model", model, "model descriptor (see README)");
  verify_cmd->add_option("--seeds", vo.seeds, "number of random points")->check(CLI::PositiveNumber);
  verify_cmd->add_option("--seed", base_seed, "first seed");
  verify_cmd->add_option("--tol", tol, "loosen the qh1/qh2 threshold (echoed in the report)");
  verify_cmd->add_option("--workers", vo.workers, "worker threads")->check(CLI::Range(1, 256));
  verify_cmd->add_flag("--corrupt", corrupt, "negative control: flip the sign of one term of the two-form");

  std::vector<std::string> fuse_presets, fuse_inputs;
  std::string fuse_out;
  int fuse_seeds = 20;
  int fuse_workers = 1;
  auto* fuse_cmd = app.add_subcommand("fuse", "fuse A(Q) spaces, check twist bookkeeping and the axiom suite");
  fuse_cmd->add_option("--preset", fuse_presets, "preset names, in fusion order");
  fuse_cmd->add_option("--input", fuse_inputs, "class files, fused after the presets");
  fuse_cmd->add_option("--seeds", fuse_seeds, "random points for the axiom sweep")->check(CLI::NonNegativeNumber);
  fuse_cmd->add_option("--workers", fuse_workers, "worker threads")->check(CLI::Range(1, 256));
  fuse_cmd->add_option("--out", fuse_out, "output path (default stdout)");

  std::string preset_name;
  std::string preset_out;
  auto* preset_cmd = app.add_subcommand("preset", "list presets, or print one");
  preset_cmd->add_option("name", preset_name, "preset to print");
  preset_cmd->add_option("--out", preset_out, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kInputError;
  }

  try {
    if (analyze_cmd->parsed()) {
      emit(analyze(load_class(analyze_opts)).dump(2) + "\n", analyze_opts.out);
      return kPass;
    }
    if (diagram_cmd->parsed()) {
      const auto D = stokes_diagram(load_class(diagram_opts), samples);
      emit(format == "svg" ? to_svg(D) : to_json(D).dump(2) + "\n", diagram_opts.out);
      return kPass;
    }
    if (verify_cmd->parsed()) {
      const auto desc = model.empty() ? class_descriptor(verify_opts) : model;
      vo.base_seed = base_seed;
      if (tol > 0) {
        if (tol < vo.thresholds.qh) throw ParseError("--tol", "overrides may only loosen the threshold");
        vo.thresholds.qh = tol;
        vo.overridden = tol != Thresholds{}.qh;
      }
      const auto m = build_model(desc, corrupt);
      const auto rep = verify(m, vo);
      emit(to_json(rep).dump(2) + "\n", verify_opts.out);
      std::cerr << desc << ": " << (rep.pass ? "pass" : "FAIL") << " (" << vo.seeds << " seeds, " << rep.seconds
                << " s)\n";
      return rep.pass ? kPass : kFail;
    }
    if (fuse_cmd->parsed()) {
      std::vector<std::string> parts;
      for (const auto& p : fuse_presets) parts.push_back(p);
      for (const auto& f : fuse_inputs) parts.push_back("file:" + f);
      if (parts.size() < 2) throw ParseError("arguments", "fusion needs at least two classes");
      std::string desc = "fuse:";
      for (std::size_t k = 0; k < parts.size(); ++k) desc += (k ? "+" : "") + parts[k];
      const auto m = build_model(desc);

      // the fused G-moment carries the composite of the factor twists
      Rng rng(fnv1a(m.canonical));
      const auto p = m.space->sample(rng);
      const auto& fused = dynamic_cast<const InternallyFused&>(*m.space);
      const auto factors = fused.base().moment(p);
      const auto groups = fused.base().groups();
      std::vector<Automorphism> twists;
      for (std::size_t k = 0; k < groups.size(); ++k)
        if (groups[k].name == "G") twists.push_back(factors[k].phi);
      const bool twist_ok = m.space->moment(p).front().phi.same_as(Automorphism::composite(twists));

      Json out;
      out["descriptor"] = desc;
      out["space"] = m.space->name();
      out["dimension"] = m.space->dimension();
      Json gj = Json::array();
      for (const auto& g : m.space->groups()) gj.push_back({{"name", g.name}, {"dim", g.lie.sum()}});
      out["groups"] = gj;
      out["twist"] = m.space->moment(p).front().phi.describe();
      out["twist_composes"] = twist_ok;
      bool pass = twist_ok;
      if (fuse_seeds > 0) {
        VerifyOptions fo;
        fo.seeds = fuse_seeds;
        fo.workers = fuse_workers;
        const auto rep = verify(m, fo);
        out["verify"] = to_json(rep);
        pass = pass && rep.pass;
      }
      out["pass"] = pass;
      emit(out.dump(2) + "\n", fuse_out);
      return pass ? kPass : kFail;
    }
    if (preset_cmd->parsed()) {
      if (preset_name.empty()) {
        std::string text;
        for (const auto& k : list_presets()) text += k + "\n";
        emit(text, preset_out);
      } else {
        emit(read_json_file(preset_path(preset_name)).dump(2) + "\n", preset_out);
      }
      return kPass;
    }
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
