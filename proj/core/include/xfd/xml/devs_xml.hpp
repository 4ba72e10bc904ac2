#ifndef XFD_XML_DEVS_XML_HPP
#define XFD_XML_DEVS_XML_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "xfd/model.hpp"
#include "xfd/registry.hpp"
#include "xfd/violation.hpp"
#include "xfd/xml/dom.hpp"

namespace xfd::devs_xml {

/// The two published spellings of each model format. The *Schema dialects
/// are the normative ones (emission target); the *Variant dialects are the
/// alternate spellings found in circulating instance documents, accepted on
/// input only.
enum class Dialect { AtomicSchema, CoupledSchema, AtomicVariant, CoupledVariant };

enum class DocKind { Atomic, Coupled };

std::string to_string(Dialect d);

/// Reads an <Atomic> document in either dialect (mixing spellings is a
/// dialect-mismatch error). The first listed state is the initial state; a
/// missing ScheduleIndicator defaults to true; a missing ta entry means the
/// state is passive. Throws xml::ParseError carrying violations when the
/// document cannot produce a deterministic spec.
AtomicSpec parse_atomic_xml(const xml::Node& doc, Dialect* dialect_out = nullptr);

/// Reads a <Digraph> document in either dialect. Model "type"/"platform"
/// attributes are preserved as hints.
CoupledSpec parse_coupled_xml(const xml::Node& doc, Dialect* dialect_out = nullptr);

/// Emits the normative atomic dialect: section order inports, states,
/// outports, deltint, delttext, timeAdvance, lamdas; the initial state
/// first; ta entries only for finite timeouts; declaration order elsewhere.
/// Requires a spec that passes validate_atomic.
xml::Node emit_atomic_xml(const AtomicSpec& spec);

/// Emits the normative coupled dialect: section order Couplings, Models,
/// Inports, Outports; name/host attributes on Digraph when non-empty.
xml::Node emit_coupled_xml(const CoupledSpec& spec);

/// Native structural validation of a document against its dialect: required
/// attributes, section order (strict dialects only), occurrence bounds,
/// numeric/boolean lexical forms, dialect consistency. Returns findings,
/// never throws; an empty-timeAdvance or empty-Couplings section is a
/// warning, everything else an error.
std::vector<Violation> validate_document(const xml::Node& doc, DocKind kind);

/// Convenience: parse + serialize strings.
AtomicSpec parse_atomic_file(const std::filesystem::path& file);
CoupledSpec parse_coupled_file(const std::filesystem::path& file);
std::string emit_atomic_string(const AtomicSpec& spec);
std::string emit_coupled_string(const CoupledSpec& spec);

struct LoadResult {
  ModelRegistry registry;
  std::string root;  // registry key of the root model
};

/// Loads <root_file> and, recursively, <childName>.xml from `dir` for every
/// child reference. A document's root element decides its kind. Model names
/// default to the lookup key when the document carries none. Throws on
/// missing files, cyclic references, parse failures and registries that do
/// not validate.
LoadResult load_model_tree(const std::filesystem::path& root_file,
                           const std::filesystem::path& dir);

}  // namespace xfd::devs_xml

#endif
