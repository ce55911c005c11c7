/*!
  \file maxsat.hpp
  \brief Lexicographic MaxSAT by linear search, solution enumeration and WCNF exchange
*/

#pragma once

#include "encoder.hpp"
#include "sat.hpp"

#include <charconv>
#include <chrono>
#include <limits>
#include <sstream>

namespace cltl
{

enum class solve_status
{
  optimum,     /* every layer optimized */
  satisfiable, /* no soft layers: any model */
  unsat,
  timeout,     /* deadline hit; the model, if any, is the best found so far */
};

struct solve_stats
{
  uint64_t solve_calls = 0;
  uint64_t conflicts = 0;
  double seconds = 0;
};

struct solve_result
{
  solve_status status = solve_status::unsat;
  assignment model;
  std::vector<int64_t> costs; /* per layer, priority-descending */
  solve_stats stats;

  bool has_model() const noexcept { return !model.empty(); }
};

struct lex_options
{
  bool co_optimal = false; /* enumeration keeps the first optimum fixed instead of relaxing it */
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

/*!
  \brief Optimizes the soft layers of a problem in priority order.

  Each layer gets a sequential counter over its violated literals; `at_least[j]`
  holds whenever j or more are violated. A layer is optimized by asserting
  smaller bounds until the solver answers UNSAT, and its optimum is then held
  as an assumption while lower layers are optimized.
*/
template<sat_backend Backend = sat_solver>
class lex_solver
{
public:
  lex_solver( problem_cnf const& p, lex_options opts = {} ) : p_( p ), opts_( opts )
  {
    s_.reserve_vars( p.vars.num_vars() );
    for ( auto const& c : p.hard )
      s_.add_clause( c );
    if constexpr ( requires { s_.set_deadline( opts.deadline ); } )
      s_.set_deadline( opts.deadline );
    for ( auto const& layer : p.layers )
      counters_.push_back( build_counter( layer.lits ) );
  }

  /*! \brief Lexicographically optimal model of the hard clauses added so far. */
  solve_result solve()
  {
    auto const start = std::chrono::steady_clock::now();
    auto r = optimize( opts_.co_optimal ? fixed_ : std::vector<int>{} );
    if ( r.status == solve_status::optimum && fixed_.empty() )
      fixed_ = last_bounds_;
    finish( r, start );
    return r;
  }

  /*! \brief Excludes the structure of `prev` and returns the next best one. */
  solve_result next( solve_result const& prev )
  {
    if ( prev.has_model() )
      s_.add_clause( blocking_clause( p_, prev.model ) );
    return solve();
  }

  void add_clause( clause const& c ) { s_.add_clause( c ); }
  Backend& backend() noexcept { return s_; }

private:
  std::vector<int> build_counter( std::vector<int> const& lits )
  {
    /* prev[j-1] = "at least j of the violations seen so far" */
    std::vector<int> prev;
    for ( auto l : lits )
    {
      int const x = -l;
      std::vector<int> cur( prev.size() + 1 );
      for ( std::size_t j = 0; j < cur.size(); ++j )
      {
        cur[j] = s_.new_var();
        if ( j < prev.size() )
          s_.add_clause( { -prev[j], cur[j] } );
        if ( j == 0 )
          s_.add_clause( { -x, cur[j] } );
        else
          s_.add_clause( { -x, -prev[j - 1], cur[j] } );
      }
      prev = std::move( cur );
    }
    return prev;
  }

  /* literal asserting at most `c` violations in layer k */
  int at_most( std::size_t k, int64_t c ) const
  {
    auto const& ctr = counters_[k];
    return c >= static_cast<int64_t>( ctr.size() ) ? 0 : -ctr[static_cast<std::size_t>( c )];
  }

  int64_t violations( std::size_t k ) const
  {
    int64_t c = 0;
    for ( auto l : p_.layers[k].lits )
      c += s_.model_value( std::abs( l ) ) != ( l > 0 );
    return c;
  }

  assignment snapshot() const
  {
    assignment a( static_cast<std::size_t>( p_.vars.num_vars() ) + 1, 0 );
    for ( int v = 1; v <= p_.vars.num_vars(); ++v )
      a[v] = s_.model_value( v );
    return a;
  }

  std::vector<int64_t> costs_of( assignment const& a ) const { return layer_costs( p_, a ); }

  solve_result optimize( std::vector<int> assumptions )
  {
    solve_result r;
    auto status = s_.solve( assumptions );
    if ( status != sat_result::sat )
    {
      r.status = status == sat_result::unsat ? solve_status::unsat : solve_status::timeout;
      return r;
    }
    r.model = snapshot();
    last_bounds_.clear();
    for ( std::size_t k = 0; k < counters_.size(); ++k )
    {
      auto c = violations_in( r.model, k );
      while ( c > 0 )
      {
        auto tight = assumptions;
        tight.push_back( at_most( k, c - 1 ) );
        status = s_.solve( tight );
        if ( status == sat_result::unknown )
        {
          r.status = solve_status::timeout;
          r.costs = costs_of( r.model );
          return r;
        }
        if ( status == sat_result::unsat )
          break;
        r.model = snapshot();
        c = violations( k );
      }
      if ( auto const bound = at_most( k, c ) )
      {
        assumptions.push_back( bound );
        last_bounds_.push_back( bound );
      }
    }
    r.status = p_.layers.empty() ? solve_status::satisfiable : solve_status::optimum;
    r.costs = costs_of( r.model );
    return r;
  }

  int64_t violations_in( assignment const& a, std::size_t k ) const
  {
    int64_t c = 0;
    for ( auto l : p_.layers[k].lits )
      c += ( a[std::abs( l )] != 0 ) != ( l > 0 );
    return c;
  }

  void finish( solve_result& r, std::chrono::steady_clock::time_point start )
  {
    r.stats.seconds = std::chrono::duration<double>( std::chrono::steady_clock::now() - start ).count();
    if constexpr ( requires { s_.statistics(); } )
    {
      r.stats.solve_calls = s_.statistics().solves - calls_before_;
      r.stats.conflicts = s_.statistics().conflicts - conflicts_before_;
      calls_before_ = s_.statistics().solves;
      conflicts_before_ = s_.statistics().conflicts;
    }
  }

  problem_cnf const& p_;
  lex_options opts_;
  Backend s_;
  std::vector<std::vector<int>> counters_;
  std::vector<int> fixed_, last_bounds_;
  uint64_t calls_before_ = 0, conflicts_before_ = 0;
};

inline solve_result solve_lex( problem_cnf const& p, lex_options opts = {} )
{
  return lex_solver<>( p, opts ).solve();
}

/*
 * WCNF exchange
 */

class wcnf_error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct wcnf_instance
{
  int num_vars = 0;
  std::vector<clause> hard;
  std::vector<std::pair<uint64_t, clause>> soft;
  uint64_t top = 1;
};

/*! \brief Weight per layer such that one unit of a layer outweighs all lower layers together. */
inline std::vector<uint64_t> layer_weights( problem_cnf const& p )
{
  constexpr uint64_t limit = uint64_t( std::numeric_limits<int64_t>::max() );
  std::vector<uint64_t> w( p.layers.size(), 1 );
  unsigned __int128 acc = 1;
  for ( std::size_t k = p.layers.size(); k-- > 0; )
  {
    if ( acc > limit )
      throw wcnf_error( "soft weights exceed the 63-bit range" );
    w[k] = static_cast<uint64_t>( acc );
    acc *= p.layers[k].lits.size() + 1;
  }
  return w;
}

inline wcnf_instance to_wcnf( problem_cnf const& p )
{
  wcnf_instance out;
  out.num_vars = p.vars.num_vars();
  out.hard = p.hard;
  auto const w = layer_weights( p );
  unsigned __int128 sum = 0;
  for ( std::size_t k = 0; k < p.layers.size(); ++k )
    for ( auto l : p.layers[k].lits )
    {
      out.soft.push_back( { w[k], { l } } );
      sum += w[k];
    }
  if ( sum + 1 > uint64_t( std::numeric_limits<int64_t>::max() ) )
    throw wcnf_error( "soft weights exceed the 63-bit range" );
  out.top = static_cast<uint64_t>( sum ) + 1;
  return out;
}

inline std::string write_wcnf( wcnf_instance const& w )
{
  std::string out = "p wcnf " + std::to_string( w.num_vars ) + " " + std::to_string( w.hard.size() + w.soft.size() ) + " " +
                    std::to_string( w.top ) + "\n";
  auto line = [&]( uint64_t weight, clause const& c ) {
    out += std::to_string( weight );
    for ( auto l : c )
      out += " " + std::to_string( l );
    out += " 0\n";
  };
  for ( auto const& c : w.hard )
    line( w.top, c );
  for ( auto const& [weight, c] : w.soft )
    line( weight, c );
  return out;
}

/*! \brief Reads the classic `p wcnf` form or the headerless form with `h` for hard clauses. */
inline wcnf_instance read_wcnf( std::string const& text )
{
  wcnf_instance out;
  std::istringstream in( text );
  std::string raw;
  bool header = false;
  std::size_t line_no = 0;
  auto fail = [&]( std::string const& msg ) { throw wcnf_error( "line " + std::to_string( line_no ) + ": " + msg ); };
  auto parse_int = [&]( std::string const& tok, auto& value ) {
    auto [ptr, ec] = std::from_chars( tok.data(), tok.data() + tok.size(), value );
    if ( ec != std::errc{} || ptr != tok.data() + tok.size() )
      fail( "bad number '" + tok + "'" );
  };
  int max_var = 0;
  while ( std::getline( in, raw ) )
  {
    ++line_no;
    std::istringstream ls( raw );
    std::string first;
    if ( !( ls >> first ) || first == "c" || first[0] == 'c' )
      continue;
    if ( first == "p" )
    {
      std::string fmt;
      ls >> fmt;
      if ( fmt != "wcnf" )
        fail( "expected 'p wcnf'" );
      std::string v, c, t;
      if ( !( ls >> v >> c >> t ) )
        fail( "incomplete header" );
      parse_int( v, out.num_vars );
      parse_int( t, out.top );
      header = true;
      continue;
    }
    bool hard = false;
    uint64_t weight = 0;
    if ( first == "h" )
      hard = true;
    else
      parse_int( first, weight );
    clause c;
    std::string tok;
    bool closed = false;
    while ( ls >> tok )
    {
      int l = 0;
      parse_int( tok, l );
      if ( l == 0 )
      {
        closed = true;
        break;
      }
      max_var = std::max( max_var, std::abs( l ) );
      c.push_back( l );
    }
    if ( !closed )
      fail( "clause not terminated by 0" );
    if ( header && !hard && weight >= out.top )
      hard = true;
    if ( hard )
      out.hard.push_back( std::move( c ) );
    else
      out.soft.push_back( { weight, std::move( c ) } );
  }
  if ( !header )
  {
    out.num_vars = max_var;
    unsigned __int128 sum = 0;
    for ( auto const& [w, c] : out.soft )
      sum += w;
    out.top = static_cast<uint64_t>( sum ) + 1;
  }
  return out;
}

/*! \brief One `var <id> <meaning>` line per variable. */
inline std::string write_var_map( problem_cnf const& p, prop_list const& ap )
{
  std::string out;
  for ( int v = 1; v <= p.vars.num_vars(); ++v )
    out += "var " + std::to_string( v ) + " " + p.vars.describe( v, ap, p.program ) + "\n";
  return out;
}

enum class external_status
{
  optimum,
  satisfiable,
  unsat,
  unknown,
};

struct external_model
{
  external_status status = external_status::unknown;
  assignment values; /* indexed by variable; empty without a model */
};

/*!
  \brief Parses solver output: an `s` status line and `v` lines.

  `v` lines hold either signed literals (optionally over several lines, ending
  in 0) or one string of 0/1 characters giving variables 1, 2, ... in order.
*/
inline external_model parse_external_model( std::string const& text, int num_vars = 0 )
{
  external_model out;
  std::istringstream in( text );
  std::string raw;
  std::vector<int> lits;
  std::string bits;
  bool any_v = false;
  while ( std::getline( in, raw ) )
  {
    std::istringstream ls( raw );
    std::string tag;
    if ( !( ls >> tag ) )
      continue;
    if ( tag == "s" )
    {
      std::string rest;
      std::getline( ls, rest );
      if ( rest.find( "UNSAT" ) != std::string::npos )
        out.status = external_status::unsat;
      else if ( rest.find( "OPTIMUM" ) != std::string::npos )
        out.status = external_status::optimum;
      else if ( rest.find( "SATISFIABLE" ) != std::string::npos )
        out.status = external_status::satisfiable;
      else
        out.status = external_status::unknown;
    }
    else if ( tag == "v" )
    {
      any_v = true;
      std::vector<std::string> toks;
      std::string tok;
      while ( ls >> tok )
        toks.push_back( tok );
      if ( toks.size() == 1 && toks[0].find_first_not_of( "01" ) == std::string::npos )
        bits += toks[0];
      else
        for ( auto const& t : toks )
        {
          int l = 0;
          auto [ptr, ec] = std::from_chars( t.data(), t.data() + t.size(), l );
          if ( ec != std::errc{} || ptr != t.data() + t.size() )
            throw wcnf_error( "malformed value line: '" + raw + "'" );
          if ( l != 0 )
            lits.push_back( l );
        }
    }
  }
  if ( out.status == external_status::unsat )
    return out;
  if ( !any_v )
  {
    if ( out.status == external_status::optimum || out.status == external_status::satisfiable )
      throw wcnf_error( "solver output has a status but no value lines" );
    throw wcnf_error( "solver output has no value lines" );
  }
  if ( !bits.empty() && !lits.empty() )
    throw wcnf_error( "solver output mixes literal and bit-string value lines" );
  int width = static_cast<int>( bits.size() );
  for ( auto l : lits )
    width = std::max( width, std::abs( l ) );
  width = std::max( width, num_vars );
  out.values.assign( static_cast<std::size_t>( width ) + 1, 0 );
  for ( std::size_t i = 0; i < bits.size(); ++i )
    out.values[i + 1] = bits[i] == '1';
  for ( auto l : lits )
    out.values[std::abs( l )] = l > 0;
  if ( out.status == external_status::unknown )
    out.status = external_status::satisfiable;
  return out;
}

/*! \brief Renders a model as a literal `v` line. */
inline std::string render_model( assignment const& a, int num_vars )
{
  std::string out = "v";
  for ( int v = 1; v <= num_vars; ++v )
    out += " " + std::to_string( static_cast<std::size_t>( v ) < a.size() && a[v] ? v : -v );
  return out + " 0\n";
}

} // namespace cltl
