#ifndef XFD_TESTS_XSLT_INTERP_HPP
#define XFD_TESTS_XSLT_INTERP_HPP

#include "xfd/xml/dom.hpp"

namespace xfd::testsupport {

/// Minimal XSLT 1.0 interpreter covering the constructs used by the
/// vendored scxml-to-statemachine stylesheet: template match/mode
/// dispatch, apply-templates, value-of, if with count() tests, variables,
/// and the XPath fragments "//name[pred]", "@attr", "../@attr",
/// "../../@attr" and "$var". It serves as the reference route for checking
/// the native transform and shares nothing with it beyond the XML DOM.
xfd::xml::Node run_xslt(const xfd::xml::Node& stylesheet, const xfd::xml::Node& input);

}  // namespace xfd::testsupport

#endif
