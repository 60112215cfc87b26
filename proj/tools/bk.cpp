#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "commands.hpp"

using bk::cli::json;

namespace {

const std::map<std::string, std::string> kDescriptions{
    {"check-height", "is the Frobenius cokernel killed by u^h (h = p unless given)"},
    {"check-sd", "strong divisibility, with a basis witness when it holds"},
    {"check-crys", "crystalline verdict for an induced lattice or a filtered module"},
    {"hodge-type", "graded dimensions per embedding"},
    {"tangent", "polar tangent directions and the reducedness verdict"},
    {"enumerate-2d", "crystalline shape lattices in a rank-two induction"},
    {"enumerate-reducible", "reducible rank-two lattices for a given extension class"},
    {"verify-family", "check a lattice family over F[T]"},
    {"components", "connect shape lattices to the pushforward through families"},
    {"cyclofree", "cyclotomic-freeness of Jordan-Hoelder factors"},
    {"reproduce-paper", "recompute every worked example into one manifest"},
    {"verify", "replay a saved report and recheck its witnesses"},
};

json read_document(const std::string& path) {
  if (path.empty()) return json();
  std::ifstream in(path);
  if (!in) throw bk::cli::SchemaError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw bk::cli::SchemaError(std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Breuil-Kisin module toolkit"};
  app.require_subcommand(1);
  std::string in_path, out_path;
  bk::cli::Options opt;
  for (const auto& name : bk::cli::command_names()) {
    auto* sub = app.add_subcommand(name, kDescriptions.at(name));
    sub->add_option("--in", in_path, "input document (JSON)");
    sub->add_option("--out", out_path, "report path (JSON); stdout summary only when omitted");
    sub->add_option("--precision", opt.precision, "working u-adic precision (0 = automatic)");
    sub->add_option("--pole-bound", opt.pole_bound, "pole bound D for the tangent solve (0 = p)");
    sub->add_flag("--strong", opt.strong, "use the strong cyclotomic-free condition");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : bk::cli::kInputError;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  try {
    if (in_path.empty() && command != "reproduce-paper") throw bk::cli::SchemaError(command + " needs --in");
    const bk::cli::Outcome out = bk::cli::run_command(command, read_document(in_path), opt);
    std::cout << out.summary << "\n";
    if (!out_path.empty()) {
      std::ofstream f(out_path);
      if (!f) throw bk::cli::SchemaError("cannot write " + out_path);
      f << out.report.dump(2) << "\n";
    }
    return out.exit_code;
  } catch (const bk::cli::SchemaError& e) {
    std::cerr << "input error: " << e.what() << "\n";
  } catch (const bk::PrecisionError& e) {
    std::cerr << "precision exhausted in " << command << ": " << e.what() << "\n";
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
  } catch (const std::domain_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
  } catch (const bk::FamilyError& e) {
    std::cerr << "input error: " << e.what() << "\n";
  }
  return bk::cli::kInputError;
}
