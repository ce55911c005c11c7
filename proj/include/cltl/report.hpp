/*!
  \file report.hpp
  \brief Human-readable and line-oriented machine output for runs
*/

#pragma once

#include "io.hpp"
#include "learner.hpp"

#include <cstdio>

namespace cltl
{

enum class output_format
{
  human,
  machine,
};

inline std::string_view status_name( learn_status s )
{
  switch ( s )
  {
  case learn_status::solved: return "solved";
  case learn_status::unsat: return "unsat";
  case learn_status::timeout: return "timeout";
  case learn_status::verification_failed: return "verification-failed";
  }
  return "unknown";
}

inline std::string format_seconds( double s )
{
  char buf[32];
  std::snprintf( buf, sizeof buf, "%.3f", s );
  return buf;
}

/*! \brief Report for one solution (or a verified formula). */
inline std::string render_solution( solution const& sol, constraint::program const& p, std::vector<uint32_t> const& priorities,
                                    prop_list const& ap, output_format f )
{
  std::string out;
  auto const text = to_string( sol.dag, ap );
  auto const pass = []( bool b ) { return std::string( b ? "pass" : "FAIL" ); };
  if ( f == output_format::machine )
  {
    if ( sol.index )
      out += "solution: " + std::to_string( sol.index ) + "\n";
    out += "formula: " + text + "\n";
    out += "nodes: " + std::to_string( dag_size( sol.dag ) ) + "\n";
    out += "tree-size: " + std::to_string( tree_size( *dag_to_formula( sol.dag ) ) ) + "\n";
    for ( auto const& line : detail::split( dag_listing( sol.dag, ap ), '\n' ) )
      if ( !line.empty() )
        out += "dag: " + line + "\n";
    for ( std::size_t c = 0; c < p.nodes.size() && c < sol.w.size(); ++c )
      out += "node." + p.nodes[c].name + ": " + std::to_string( sol.w[c] ) + "\n";
    for ( std::size_t k = 0; k < sol.costs.size() && k < priorities.size(); ++k )
      out += "cost[" + std::to_string( priorities[k] ) + "]: " + std::to_string( sol.costs[k] ) + "\n";
    out += "check.sample: " + pass( sol.check.sample_ok ) + "\n";
    for ( std::size_t c = 0; c < sol.check.constraints.size(); ++c )
      out += "check.constraint." + std::to_string( c ) + ": " + pass( sol.check.constraints[c] ) + "\n";
    out += "check.costs: " + pass( sol.check.costs_ok ) + "\n";
    if ( sol.stats.solve_calls )
    {
      out += "solver.calls: " + std::to_string( sol.stats.solve_calls ) + "\n";
      out += "solver.conflicts: " + std::to_string( sol.stats.conflicts ) + "\n";
      out += "solver.seconds: " + format_seconds( sol.stats.seconds ) + "\n";
    }
    return out;
  }

  out += ( sol.index ? "#" + std::to_string( sol.index ) + "  " : std::string() ) + text + "\n";
  out += "  nodes " + std::to_string( dag_size( sol.dag ) ) + ", tree size " + std::to_string( tree_size( *dag_to_formula( sol.dag ) ) );
  if ( !sol.costs.empty() )
  {
    out += ", costs";
    for ( std::size_t k = 0; k < sol.costs.size() && k < priorities.size(); ++k )
      out += " [" + std::to_string( priorities[k] ) + "]=" + std::to_string( sol.costs[k] );
  }
  out += "\n";
  for ( std::size_t c = 0; c < p.nodes.size() && c < sol.w.size(); ++c )
    out += "  node " + p.nodes[c].name + " = slot " + std::to_string( sol.w[c] ) + "\n";
  out += "  sample: " + pass( sol.check.sample_ok );
  for ( auto t : sol.check.misclassified )
    out += " (trace " + std::to_string( t ) + " misclassified)";
  out += "\n";
  for ( std::size_t c = 0; c < sol.check.constraints.size(); ++c )
    out += "  constraint " + std::to_string( c ) + ": " + pass( sol.check.constraints[c] ) + "  " +
           constraint::unparse( *p.constraints[c] ) + "\n";
  if ( !sol.check.costs_ok )
    out += "  costs: FAIL (solver and evaluator disagree)\n";
  return out;
}

inline std::string render_summary( learn_outcome const& o, output_format f )
{
  if ( f == output_format::machine )
    return "status: " + std::string( status_name( o.status ) ) + "\nsolutions: " + std::to_string( o.solutions.size() ) +
           "\nbound: " + std::to_string( o.bound ) + "\nseconds: " + format_seconds( o.seconds ) + "\n";
  std::string out = std::string( status_name( o.status ) ) + ": " + std::to_string( o.solutions.size() ) + " solution" +
                    ( o.solutions.size() == 1 ? "" : "s" ) + " at bound " + std::to_string( o.bound ) + " in " +
                    format_seconds( o.seconds ) + " s\n";
  return out;
}

} // namespace cltl
