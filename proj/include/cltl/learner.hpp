/*!
  \file learner.hpp
  \brief Learning, enumeration and verification on top of the encoder and the MaxSAT layer
*/

#pragma once

#include "constraint/eval.hpp"
#include "encoder.hpp"
#include "maxsat.hpp"

#include <functional>
#include <variant>

namespace cltl
{

struct learn_options
{
  std::size_t max_nodes = 5;
  bool default_size = true;
  bool tree_mode = false;
  bool iterative = false;  /* grow the bound until the hard clauses are satisfiable, then optimize there */
  bool co_optimal = false; /* enumeration only among solutions with the first optimum */
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

/*! \brief Independent re-check of a solution. */
struct verification
{
  bool sample_ok = false;
  std::vector<std::size_t> misclassified; /* global trace indices */
  std::vector<bool> constraints;          /* per hard constraint */
  bool costs_ok = true;                   /* solver costs equal the concrete objective costs */

  bool all() const
  {
    for ( bool c : constraints )
      if ( !c )
        return false;
    return sample_ok && costs_ok;
  }
};

struct solution
{
  syntax_dag dag;
  constraint::witness w;
  std::vector<int64_t> costs; /* per priority, highest first */
  verification check;
  std::size_t index = 0;      /* 1-based position in an enumeration */
  solve_stats stats;
};

enum class learn_status
{
  solved,
  unsat,
  timeout,
  verification_failed,
};

struct learn_outcome
{
  learn_status status = learn_status::unsat;
  std::vector<solution> solutions;
  std::size_t bound = 0;          /* node bound actually used */
  constraint::program program;    /* the program that was encoded */
  std::vector<uint32_t> priorities;
  double seconds = 0;
};

/*! \brief Checks a DAG against the sample and every hard constraint (under the witness), and the reported costs. */
inline verification verify_solution( sample const& s, constraint::program const& p, syntax_dag const& d,
                                     constraint::witness const& w, std::size_t bound,
                                     std::optional<std::vector<int64_t>> const& reported = std::nullopt )
{
  verification v;
  for ( std::size_t t = 0; t < s.size(); ++t )
    if ( evaluate( d, s.trace( t ), 0 ) != s.is_positive( t ) )
      v.misclassified.push_back( t );
  v.sample_ok = v.misclassified.empty();
  for ( auto const& c : p.constraints )
    v.constraints.push_back( constraint::holds( p, *c, d, w ) );
  if ( reported )
    v.costs_ok = constraint::layer_costs( p, d, w, bound ) == *reported;
  return v;
}

/*! \brief Witness for a DAG without one: the first satisfying all constraints, else the one satisfying most. */
inline constraint::witness choose_witness( constraint::program const& p, syntax_dag const& d )
{
  std::optional<constraint::witness> best;
  std::size_t best_count = 0;
  for ( auto const& w : constraint::candidate_witnesses( p, d ) )
  {
    std::size_t count = 0;
    for ( auto const& c : p.constraints )
      count += constraint::holds( p, *c, d, w );
    if ( !best || count > best_count )
    {
      best = w;
      best_count = count;
    }
    if ( count == p.constraints.size() )
      break;
  }
  return best.value_or( constraint::witness( p.nodes.size(), 0 ) );
}

namespace detail
{

inline bool expired( learn_options const& o )
{
  return o.deadline && std::chrono::steady_clock::now() >= *o.deadline;
}

/* smallest bound whose hard clauses are satisfiable, or the reason there is none */
inline std::variant<std::size_t, learn_status> iterative_bound( sample const& s, constraint::program const& p, learn_options const& o )
{
  for ( std::size_t b = std::max<std::size_t>( 1, p.nodes.size() + 1 ); b <= o.max_nodes; ++b )
  {
    if ( expired( o ) )
      return learn_status::timeout;
    encoding_config cfg{ b, false, o.tree_mode };
    auto const cnf = encode_full( s, p, cfg );
    sat_solver solver;
    solver.set_deadline( o.deadline );
    solver.reserve_vars( cnf.vars.num_vars() );
    for ( auto const& c : cnf.hard )
      solver.add_clause( c );
    auto const r = solver.solve();
    if ( r == sat_result::sat )
      return b;
    if ( r == sat_result::unknown )
      return learn_status::timeout;
  }
  return learn_status::unsat;
}

} // namespace detail

/*!
  \brief Learns up to `limit` solutions, calling `on_solution` as each one is verified.

  Later solutions are the best among those not yet reported, so costs never
  decrease along the sequence.
*/
inline learn_outcome enumerate_solutions( sample const& s, constraint::program const& p, learn_options const& o, std::size_t limit,
                                          std::function<void( solution const& )> const& on_solution = {} )
{
  auto const start = std::chrono::steady_clock::now();
  learn_outcome out;
  auto finish = [&]( learn_status st ) {
    out.status = st;
    out.seconds = std::chrono::duration<double>( std::chrono::steady_clock::now() - start ).count();
    return out;
  };

  out.bound = o.max_nodes;
  if ( o.iterative )
  {
    auto const b = detail::iterative_bound( s, p, o );
    if ( auto const* st = std::get_if<learn_status>( &b ) )
      return finish( *st );
    out.bound = std::get<std::size_t>( b );
  }

  encoding_config cfg{ out.bound, o.default_size, o.tree_mode };
  auto const cnf = encode_full( s, p, cfg );
  out.program = cnf.program;
  out.priorities = cnf.program.priorities();
  if ( limit == 0 )
    return finish( learn_status::solved );

  lex_options lo;
  lo.co_optimal = o.co_optimal;
  lo.deadline = o.deadline;
  lex_solver<> ls( cnf, lo );
  std::optional<solve_result> prev;
  while ( out.solutions.size() < limit )
  {
    auto r = prev ? ls.next( *prev ) : ls.solve();
    if ( r.status == solve_status::unsat )
      break;
    if ( r.status == solve_status::timeout )
      return finish( learn_status::timeout );

    solution sol;
    try
    {
      auto dec = decode( r.model, cnf, s );
      sol.dag = std::move( dec.dag );
      sol.w = std::move( dec.w );
    }
    catch ( decode_error const& )
    {
      return finish( learn_status::verification_failed );
    }
    sol.costs = r.costs;
    sol.stats = r.stats;
    sol.index = out.solutions.size() + 1;
    sol.check = verify_solution( s, cnf.program, sol.dag, sol.w, out.bound, r.costs );
    out.solutions.push_back( sol );
    if ( on_solution )
      on_solution( out.solutions.back() );
    if ( !sol.check.all() )
      return finish( learn_status::verification_failed );
    /* the same DAG under another slot numbering is not a new solution */
    for ( auto const& other : slot_renumberings( sol.dag ) )
      if ( other != sol.dag )
        ls.add_clause( structure_blocking_clause( cnf, other ) );
    prev = std::move( r );
  }
  return finish( out.solutions.empty() ? learn_status::unsat : learn_status::solved );
}

inline learn_outcome learn( sample const& s, constraint::program const& p, learn_options const& o )
{
  return enumerate_solutions( s, p, o, 1 );
}

} // namespace cltl
