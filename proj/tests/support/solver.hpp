#pragma once

#include <cltl/encoder.hpp>
#include <cltl/sat.hpp>

namespace cltl::testkit
{

/*! \brief A solver loaded with the hard clauses of an encoding. */
inline sat_solver load_hard( problem_cnf const& p )
{
  sat_solver s;
  s.reserve_vars( p.vars.num_vars() );
  for ( auto const& c : p.hard )
    s.add_clause( c );
  return s;
}

inline assignment model_of( sat_solver const& s, int num_vars )
{
  assignment a( static_cast<std::size_t>( num_vars ) + 1, 0 );
  for ( int v = 1; v <= num_vars; ++v )
    a[v] = s.model_value( v );
  return a;
}

/*! \brief Whether the literal holds in every model that satisfies the assumptions. */
inline bool forced( sat_solver& s, std::vector<int> assumptions, int lit )
{
  assumptions.push_back( -lit );
  return s.solve( assumptions ) == sat_result::unsat;
}

/*! \brief Every distinct structure (used, labels, children) of the hard clauses, by blocking. */
inline std::vector<syntax_dag> all_structures( problem_cnf const& p, sample const& smp, std::size_t limit = 100000 )
{
  auto s = load_hard( p );
  std::vector<syntax_dag> out;
  while ( out.size() < limit && s.solve() == sat_result::sat )
  {
    auto const a = model_of( s, p.vars.num_vars() );
    out.push_back( decode( a, p, smp ).dag );
    s.add_clause( blocking_clause( p, a ) );
  }
  return out;
}

} // namespace cltl::testkit
