// Command-line frontend: validate, simulate, transform, flatten and inspect
// XFD-DEVS models. Exit codes: 0 success, 1 domain error, 2 usage error.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "xfd/efp/efp.hpp"
#include "xfd/scxml/scxml.hpp"
#include "xfd/semantics.hpp"
#include "xfd/sim/engine.hpp"
#include "xfd/uml/uml.hpp"
#include "xfd/xml/devs_xml.hpp"
#include "xfd/xml/dom.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr int kOk = 0;
constexpr int kDomainError = 1;
constexpr int kUsageError = 2;

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw xfd::Error("file-not-found", "cannot open '" + p.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& content) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw xfd::Error("io-error", "cannot write '" + p.string() + "'");
  out << content;
}

void print_violations(const std::vector<xfd::Violation>& vs, bool as_json) {
  if (as_json) {
    ordered_json arr = ordered_json::array();
    for (const auto& v : vs)
      arr.push_back({{"code", v.code},
                     {"path", v.path},
                     {"message", v.message},
                     {"severity", v.is_error() ? "error" : "warning"}});
    std::cout << arr.dump(2) << "\n";
    return;
  }
  for (const auto& v : vs)
    std::cout << (v.is_error() ? "error: " : "warning: ") << v.code << " at " << v.path
              << ": " << v.message << "\n";
}

std::vector<xfd::Violation> dedupe(std::vector<xfd::Violation> vs) {
  std::vector<xfd::Violation> out;
  for (auto& v : vs) {
    bool seen = false;
    for (const auto& o : out)
      if (o.code == v.code && o.path == v.path && o.message == v.message) {
        seen = true;
        break;
      }
    if (!seen) out.push_back(std::move(v));
  }
  return out;
}

// ------------------------------------------------------------------ validate

int cmd_validate(const std::string& path, std::string kind, const std::string& dir,
                 bool as_json) {
  std::vector<xfd::Violation> vs;
  xfd::xml::Node doc;
  try {
    doc = xfd::xml::parse(read_file(path), path);
  } catch (const xfd::xml::ParseError& e) {
    print_violations(e.violations, as_json);
    return kDomainError;
  }

  const std::string root = doc.local_name();
  if (kind == "auto") {
    if (root == "Atomic") kind = "atomic";
    else if (root == "Digraph") kind = "coupled";
    else {
      print_violations({{xfd::codes::KindMismatch, "/" + root,
                         "root element is neither Atomic nor Digraph"}},
                       as_json);
      return kDomainError;
    }
  }
  const auto doc_kind = kind == "atomic" ? xfd::devs_xml::DocKind::Atomic
                                         : xfd::devs_xml::DocKind::Coupled;

  auto doc_vs = xfd::devs_xml::validate_document(doc, doc_kind);
  vs.insert(vs.end(), doc_vs.begin(), doc_vs.end());

  const bool kind_ok = (kind == "atomic" && root == "Atomic") ||
                       (kind == "coupled" && root == "Digraph");
  if (kind_ok) {
    try {
      if (kind == "atomic") {
        xfd::AtomicSpec spec = xfd::devs_xml::parse_atomic_xml(doc);
        auto sem = xfd::validate_atomic(spec);
        vs.insert(vs.end(), sem.begin(), sem.end());
      } else {
        xfd::CoupledSpec spec = xfd::devs_xml::parse_coupled_xml(doc);
        if (dir.empty()) {
          auto sem = xfd::validate_coupled(spec);
          vs.insert(vs.end(), sem.begin(), sem.end());
        } else {
          xfd::ModelRegistry reg;
          for (const auto& ref : spec.models) {
            const fs::path child = fs::path(dir) / (ref.child + ".xml");
            if (!fs::exists(child)) continue;  // reported as UnknownModel below
            try {
              xfd::xml::Node cdoc = xfd::xml::parse(read_file(child), child.string());
              if (cdoc.local_name() == "Atomic") {
                auto a = xfd::devs_xml::parse_atomic_xml(cdoc);
                if (a.name.empty()) a.name = ref.child;
                reg.add(std::move(a));
              } else if (cdoc.local_name() == "Digraph") {
                auto c = xfd::devs_xml::parse_coupled_xml(cdoc);
                if (c.name.empty()) c.name = ref.child;
                reg.add(std::move(c));
              }
            } catch (const xfd::Error& e) {
              vs.push_back({"ChildParseError", child.string(), e.what()});
            }
          }
          auto sem = xfd::validate_coupled(spec, reg);
          vs.insert(vs.end(), sem.begin(), sem.end());
        }
      }
    } catch (const xfd::xml::ParseError& e) {
      vs.insert(vs.end(), e.violations.begin(), e.violations.end());
    }
  }

  vs = dedupe(std::move(vs));
  print_violations(vs, as_json);
  if (xfd::has_errors(vs)) return kDomainError;
  if (!as_json && vs.empty()) std::cout << "OK: " << path << "\n";
  return kOk;
}

// ------------------------------------------------------------------ simulate

int cmd_simulate(const std::string& root_file, std::string dir, double until,
                 const std::string& format, const std::string& out_path,
                 int instant_cap) {
  if (dir.empty()) dir = fs::path(root_file).parent_path().string();
  auto loaded = xfd::devs_xml::load_model_tree(root_file, dir);
  auto tree = xfd::sim::SimTree::initialize(loaded.registry, loaded.root,
                                            xfd::TimeValue(0.0), instant_cap);
  const xfd::sim::Trace& trace = tree.run_until(xfd::TimeValue(until));

  const std::string payload =
      format == "csv" ? xfd::sim::to_csv(trace) : xfd::sim::to_jsonl(trace);
  if (out_path.empty())
    std::cout << payload;
  else
    write_file(out_path, payload);

  std::cerr << "simulated '" << loaded.root << "' until t=" << xfd::format_time(trace.termination)
            << ": " << trace.events.size() << " events\n";
  return kOk;
}

// ----------------------------------------------------------------- transform

std::vector<xfd::uml::UmlModel> registry_to_uml(const xfd::ModelRegistry& reg,
                                                const std::string& root) {
  std::vector<xfd::uml::UmlModel> models;
  if (const xfd::CoupledSpec* coupled = reg.find_coupled(root))
    models.emplace_back(xfd::uml::coupled_to_component(*coupled, reg));
  else if (const xfd::AtomicSpec* atomic = reg.find_atomic(root))
    models.emplace_back(xfd::uml::atomic_to_statemachine(*atomic));
  for (const auto& name : reg.names())
    if (const xfd::AtomicSpec* atomic = reg.find_atomic(name)) {
      if (reg.find_coupled(root) || name != root)
        models.emplace_back(xfd::uml::atomic_to_statemachine(*atomic));
    }
  return models;
}

int cmd_transform(const std::string& from, const std::string& to, const std::string& in,
                  const std::string& out_dir, bool keep_intermediate) {
  const fs::path out_base = out_dir.empty() ? fs::path(".") : fs::path(out_dir);
  const std::string stem = fs::path(in).stem().string();

  if (from == "scxml" && to == "devs") {
    xfd::xml::Node doc = xfd::xml::parse(read_file(in), in);
    auto sm = xfd::scxml::transform_scxml(doc);
    if (keep_intermediate)
      write_file(out_base / (stem + ".statemachine.xml"),
                 xfd::xml::serialize(xfd::scxml::emit_statemachine_xml(sm)));
    xfd::AtomicSpec spec = xfd::scxml::lift_statemachine(sm);
    spec.name = stem;  // one model per file, named after it
    const fs::path out = out_base / (stem + ".xml");
    write_file(out, xfd::devs_xml::emit_atomic_string(spec));
    std::cout << out.string() << "\n";
    return kOk;
  }

  if (from == "xmi" && to == "devs") {
    xfd::xml::Node doc = xfd::xml::parse(read_file(in), in);
    auto parsed = xfd::uml::parse_xmi(doc);
    for (const auto& w : parsed.warnings) std::cerr << "warning: " << w << "\n";
    xfd::ModelRegistry reg = xfd::uml::uml_to_registry(parsed.models);
    for (const auto& name : reg.names()) {
      const fs::path out = out_base / (name + ".xml");
      if (const xfd::AtomicSpec* a = reg.find_atomic(name))
        write_file(out, xfd::devs_xml::emit_atomic_string(*a));
      else
        write_file(out, xfd::devs_xml::emit_coupled_string(*reg.find_coupled(name)));
      std::cout << out.string() << "\n";
    }
    return kOk;
  }

  if (from == "devs" && to == "xmi") {
    const fs::path in_path(in);
    auto loaded = xfd::devs_xml::load_model_tree(in_path, in_path.parent_path());
    auto models = registry_to_uml(loaded.registry, loaded.root);
    const fs::path out = out_base / (stem + ".xmi");
    write_file(out, xfd::xml::serialize(xfd::uml::emit_xmi(models)));
    std::cout << out.string() << "\n";
    return kOk;
  }

  std::cerr << "unsupported transformation " << from << " -> " << to
            << " (supported: scxml->devs, xmi->devs, devs->xmi)\n";
  return kUsageError;
}

// ------------------------------------------------------------------- flatten

int cmd_flatten(const std::string& root_file, std::string dir, std::string out_dir) {
  if (dir.empty()) dir = fs::path(root_file).parent_path().string();
  auto loaded = xfd::devs_xml::load_model_tree(root_file, dir);
  auto flat = xfd::sim::flatten(loaded.registry, loaded.root);

  if (out_dir.empty()) out_dir = loaded.root + "_flat";
  const fs::path base(out_dir);
  const fs::path root_out = base / (flat.root.name + ".xml");
  write_file(root_out, xfd::devs_xml::emit_coupled_string(flat.root));
  std::cout << root_out.string() << "\n";
  for (const auto& name : flat.registry.names()) {
    if (const xfd::AtomicSpec* a = flat.registry.find_atomic(name)) {
      const fs::path out = base / (name + ".xml");
      write_file(out, xfd::devs_xml::emit_atomic_string(*a));
      std::cout << out.string() << "\n";
    }
  }
  return kOk;
}

// ------------------------------------------------------------------- inspect

int cmd_inspect(const std::string& path) {
  xfd::xml::Node doc = xfd::xml::parse(read_file(path), path);
  if (doc.local_name() == "Atomic") {
    xfd::AtomicSpec spec = xfd::devs_xml::parse_atomic_xml(doc);
    std::cout << "atomic " << spec.name << " (host " << spec.host << ")\n";
    std::cout << "  inports:";
    for (const auto& p : spec.inports) std::cout << ' ' << p;
    std::cout << "\n  outports:";
    for (const auto& p : spec.outports) std::cout << ' ' << p;
    std::cout << "\n  states:";
    for (const auto& s : spec.states)
      std::cout << ' ' << s << (s == spec.initial ? "*" : "");
    std::cout << "\n";
    for (const auto& e : spec.ta)
      std::cout << "  ta(" << e.state << ") = " << xfd::format_time(e.timeout) << "\n";
    for (const auto& e : spec.delt_int)
      std::cout << "  deltint: " << e.from << " -> " << e.to << "\n";
    for (const auto& e : spec.delt_ext)
      std::cout << "  deltext: (" << e.from << ", " << e.message << ") -> " << e.to
                << (e.schedule ? " [reschedule]" : " [keep tn]") << "\n";
    for (const auto& e : spec.lambda)
      std::cout << "  lambda(" << e.state << ") = (" << e.outport << ", " << e.label()
                << ")\n";
    return kOk;
  }
  if (doc.local_name() == "Digraph") {
    xfd::CoupledSpec spec = xfd::devs_xml::parse_coupled_xml(doc);
    std::cout << "coupled " << spec.name << " (host " << spec.host << ")\n";
    std::cout << "  inports:";
    for (const auto& p : spec.inports) std::cout << ' ' << p;
    std::cout << "\n  outports:";
    for (const auto& p : spec.outports) std::cout << ' ' << p;
    std::cout << "\n  children:";
    for (const auto& m : spec.models) std::cout << ' ' << m.child;
    std::cout << "\n";
    for (const auto& c : spec.couplings) {
      const char* kind = "??";
      switch (spec.classify(c)) {
        case xfd::CouplingKind::EIC: kind = "EIC"; break;
        case xfd::CouplingKind::EOC: kind = "EOC"; break;
        case xfd::CouplingKind::IC: kind = "IC"; break;
        case xfd::CouplingKind::Invalid: kind = "invalid"; break;
      }
      std::cout << "  " << kind << ": " << c.src << "." << c.outport << " -> " << c.dest
                << "." << c.inport << "\n";
    }
    return kOk;
  }
  std::cerr << "error: <" << doc.local_name() << "> is neither Atomic nor Digraph\n";
  return kDomainError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"XFD-DEVS toolkit: validate, simulate and transform "
               "finite-deterministic DEVS models"};
  app.require_subcommand(1);

  // validate
  std::string v_path, v_kind = "auto", v_dir;
  bool v_json = false;
  auto* validate = app.add_subcommand("validate", "check a model document");
  validate->add_option("path", v_path, "XML document")->required();
  validate->add_option("--kind", v_kind, "atomic|coupled|auto")
      ->check(CLI::IsMember({"atomic", "coupled", "auto"}));
  validate->add_option("--dir", v_dir, "directory with child model files");
  validate->add_flag("--json", v_json, "machine-readable report");

  // simulate
  std::string s_root, s_dir, s_format = "jsonl", s_out;
  double s_until = 100.0;
  int s_cap = 10000;
  bool s_seedless = false;
  auto* simulate = app.add_subcommand("simulate", "run a model and emit its trace");
  simulate->add_option("rootFile", s_root, "root model document")->required();
  simulate->add_option("--dir", s_dir, "directory with child model files");
  simulate->add_option("--until", s_until, "simulation end time (default 100)");
  simulate->add_option("--trace", s_format, "jsonl|csv")
      ->check(CLI::IsMember({"jsonl", "csv"}));
  simulate->add_option("--out", s_out, "trace file (default stdout)");
  simulate->add_option("--instant-cap", s_cap, "max consecutive steps at one instant");
  simulate->add_flag("--seedless", s_seedless,
                     "informational; the engine is deterministic and uses no RNG");

  // transform
  std::string t_from, t_to, t_in, t_out_dir;
  bool t_keep = false;
  auto* transform = app.add_subcommand("transform", "cross-transform model formats");
  transform->add_option("--from", t_from, "scxml|xmi|devs")
      ->required()
      ->check(CLI::IsMember({"scxml", "xmi", "devs"}));
  transform->add_option("--to", t_to, "devs|xmi")
      ->required()
      ->check(CLI::IsMember({"devs", "xmi"}));
  transform->add_option("input", t_in, "input document")->required();
  transform->add_option("--out-dir", t_out_dir, "output directory (default .)");
  transform->add_flag("--intermediate", t_keep,
                      "also write the intermediate statemachine document");

  // flatten
  std::string f_root, f_dir, f_out;
  auto* flatten = app.add_subcommand("flatten", "collapse a hierarchy to one level");
  flatten->add_option("rootFile", f_root, "root model document")->required();
  flatten->add_option("--dir", f_dir, "directory with child model files");
  flatten->add_option("--out", f_out, "output directory (default <root>_flat)");

  // inspect
  std::string i_path;
  auto* inspect = app.add_subcommand("inspect", "print a model summary");
  inspect->add_option("path", i_path, "XML document")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    if (validate->parsed()) return cmd_validate(v_path, v_kind, v_dir, v_json);
    if (simulate->parsed())
      return cmd_simulate(s_root, s_dir, s_until, s_format, s_out, s_cap);
    if (transform->parsed()) return cmd_transform(t_from, t_to, t_in, t_out_dir, t_keep);
    if (flatten->parsed()) return cmd_flatten(f_root, f_dir, f_out);
    if (inspect->parsed()) return cmd_inspect(i_path);
  } catch (const xfd::xml::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDomainError;
  } catch (const xfd::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDomainError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDomainError;
  }
  return kUsageError;
}
