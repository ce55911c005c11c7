/*!
  \file prelude.hpp
  \brief Named constraint presets, each written in the constraint language
*/

#pragma once

#include "parser.hpp"

#include <stdexcept>

namespace cltl::constraint
{

struct preset_info
{
  std::string_view name;
  std::string_view summary;
  std::string_view source;
};

inline constexpr preset_info presets[] = {
    { "no-dag-reuse", "every non-atom node has at most one parent and no node uses one child twice",
      "constraint all n in Nodes \\ AP : #(n.~(L + R)) <= 1;\n"
      "constraint no (L & R);\n" },
    { "no-tautology", "an implication never has the same node on both sides",
      "constraint all n in N[->] : l(n) != r(n);\n" },
    { "nnf", "negation only directly above propositions",
      "constraint all n in N[!] : l(n) in AP;\n" },
    { "liveness-pattern", "G(phi -> F psi) with phi and psi free of temporal operators",
      "node lp_g : N[G];\n"
      "node lp_imp : N[->];\n"
      "node lp_f : N[F];\n"
      "constraint root = lp_g and l(root) = lp_imp and r(lp_imp) = lp_f;\n"
      "constraint no (subNodes(l(lp_imp)) & Temporal);\n"
      "constraint no (desc(lp_f) & Temporal);\n" },
};

inline std::vector<std::string> preset_names()
{
  std::vector<std::string> out;
  for ( auto const& p : presets )
    out.emplace_back( p.name );
  return out;
}

inline program preset( std::string_view name, prop_list const& ap )
{
  for ( auto const& p : presets )
    if ( p.name == name )
      return parse_constraints( p.source, ap );
  std::string known;
  for ( auto const& p : presets )
    known += ( known.empty() ? "" : ", " ) + std::string( p.name );
  throw std::invalid_argument( "unknown preset '" + std::string( name ) + "' (known: " + known + ")" );
}

} // namespace cltl::constraint
