#pragma once

/* Constraint programs used across the grounding, encoder and acceptance tests. */

#include <cltl/constraint/prelude.hpp>

#include <string>
#include <utility>
#include <vector>

namespace cltl::testkit
{

inline std::string const voting_shape = "constraint root in N[G] and no (subNodes(l(root)) & Temporal);\n";

inline std::string const repair_program =
    "node n_g : N[G];\n"
    "node n_f : N[F];\n"
    "node n_and : N[&];\n"
    "node n_not : N[!];\n"
    "constraint some green and some red;\n"
    "rel oldSpec = {(n_and, n_f), (n_and, n_g), (n_f, green), (n_g, n_not), (n_not, red)};\n"
    "maximize[2] (L + R) & oldSpec;\n";

inline std::string const weakening_program =
    "node n_g : N[G];\n"
    "node n_imp : N[->];\n"
    "constraint root = n_g and l(root) = n_imp;\n"
    "constraint all n in desc(n_imp) : n in N[&, |, !, AP];\n"
    "constraint all n in desc(n_imp) : n in N[!] => l(n) in AP;\n"
    "constraint all n in subNodes(l(n_imp)) & N[|] : no (desc(n) & N[&]);\n"
    "constraint all n in subNodes(r(n_imp)) & N[&] : no (desc(n) & N[|]);\n"
    "constraint l(n_imp) = XrayMode or (l(n_imp) in N[&] and l(l(n_imp)) = XrayMode);\n"
    "constraint r(n_imp) = SpreaderIn or (r(n_imp) in N[|] and l(r(n_imp)) = SpreaderIn);\n";

/*! \brief Programs over two propositions named p0 and p1, for exhaustive checks at small bounds. */
inline std::vector<std::pair<std::string, std::string>> small_battery()
{
  std::vector<std::pair<std::string, std::string>> out;
  for ( auto const& p : constraint::presets )
    out.emplace_back( std::string( p.name ), std::string( p.source ) );
  out.emplace_back( "g-invariant", voting_shape );
  out.emplace_back( "weakening-shape",
                    "node n_g : N[G];\n"
                    "node n_imp : N[->];\n"
                    "constraint root = n_g and l(root) = n_imp;\n"
                    "constraint all n in desc(n_imp) : n in N[&, |, !, AP];\n"
                    "constraint all n in subNodes(l(n_imp)) & N[|] : no (desc(n) & N[&]);\n"
                    "constraint l(n_imp) = p0 or (l(n_imp) in N[&] and l(l(n_imp)) = p0);\n" );
  out.emplace_back( "retention",
                    "node a : N[F];\n"
                    "rel old = {(a, p0), (root, a)};\n"
                    "maximize[2] (L + R) & old;\n"
                    "minimize Temporal;\n" );
  out.emplace_back( "mixed",
                    "func kids(x) = x.(L + R);\n"
                    "constraint all (a, b) in L : a not in N[X] or b in AP;\n"
                    "constraint some n in Nodes : n.^(L + R) = {} and #kids(root) >= 1;\n"
                    "constraint {x | x in N[!] and l(x) in AP} = N[!] <=> no N[U];\n"
                    "constraint #(Nodes >< AP & ~L) < 3 iff one root;\n"
                    "soft[3] lone (AP & desc(root));\n"
                    "softempty[2] *L \\ ^R;\n" );
  out.emplace_back( "closure",
                    "constraint all n in Nodes : n not in n.^(L + R);\n"
                    "constraint ~(~L) = L and (root.L).R = root.(L.R);\n"
                    "constraint *(L + R) = ^(L + R) + {(x, y) | x = y};\n"
                    "minimize subNodes(root) & N[p1];\n" );
  return out;
}

} // namespace cltl::testkit
