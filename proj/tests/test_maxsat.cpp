#include <cltl/constraint/parser.hpp>
#include <cltl/maxsat.hpp>

#include "support/battery.hpp"
#include "support/properties.hpp"
#include "support/random.hpp"
#include "support/solver.hpp"
#include "support/structures.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace cltl;
using testkit::lasso;

namespace
{

using testkit::exhaustive_optimum;
using testkit::raw_problem;

encoding_config config( std::size_t n, bool size = true )
{
  encoding_config c;
  c.max_nodes = n;
  c.default_size = size;
  return c;
}

} // namespace

TEST( MaxSat, SmallExamples )
{
  {
    auto const p = raw_problem( 2, { { 1, 2 } }, { { 1, { -1, -2 } } } );
    auto const r = solve_lex( p );
    ASSERT_EQ( r.status, solve_status::optimum );
    EXPECT_EQ( r.costs, ( std::vector<int64_t>{ 1 } ) );
  }
  {
    auto const p = raw_problem( 2, { { 1, 2 } }, {} );
    EXPECT_EQ( solve_lex( p ).status, solve_status::satisfiable );
  }
  {
    auto const p = raw_problem( 2, { { 1, 2 } }, { { 2, { 1 } }, { 1, { -1, -2 } } } );
    auto const r = solve_lex( p );
    ASSERT_EQ( r.status, solve_status::optimum );
    EXPECT_TRUE( r.model[1] );
    EXPECT_FALSE( r.model[2] );
    EXPECT_EQ( r.costs, ( std::vector<int64_t>{ 0, 1 } ) );
  }
  {
    auto const p = raw_problem( 1, { { 1 }, { -1 } }, { { 1, { 1 } } } );
    EXPECT_EQ( solve_lex( p ).status, solve_status::unsat );
  }
}

TEST( MaxSat, MatchesExhaustiveOptimum )
{
  std::size_t unsat = 0;
  auto const r = testkit::lex_optimality( 99, 500, &unsat, []( std::string const& what ) { ADD_FAILURE() << what; } );
  EXPECT_EQ( r.mismatches, 0u );
  EXPECT_GT( unsat, 5u );
}

TEST( MaxSat, EnumerationGrowsInSize )
{
  prop_list ap( { "p" } );
  sample s( ap, { lasso( { "1" }, 0 ) }, {} );
  auto const p = encode_full( s, {}, config( 2 ) );
  lex_solver<> ls( p );
  auto r = ls.solve();
  ASSERT_EQ( r.status, solve_status::optimum );
  EXPECT_EQ( to_string( decode( r.model, p, s ).dag, ap ), "p" );
  r = ls.next( r );
  ASSERT_EQ( r.status, solve_status::optimum );
  EXPECT_EQ( decode( r.model, p, s ).dag.nodes.size(), 2u );
}

TEST( MaxSat, BlockingTheOnlyStructureExhausts )
{
  prop_list ap( { "p" } );
  sample s( ap, {}, {} );
  auto const p = encode_full( s, {}, config( 1 ) );
  lex_solver<> ls( p );
  auto r = ls.solve();
  ASSERT_EQ( r.status, solve_status::optimum );
  EXPECT_EQ( ls.next( r ).status, solve_status::unsat );
}

TEST( MaxSat, CoOptimalEnumerationStaysAtTheOptimum )
{
  prop_list ap( { "p", "q" } );
  sample s( ap, { lasso( { "11" }, 0 ) }, { lasso( { "00" }, 0 ) } );
  auto const p = encode_full( s, {}, config( 3 ) );
  lex_options opts;
  opts.co_optimal = true;
  lex_solver<> ls( p, opts );
  std::set<std::string> seen;
  for ( auto r = ls.solve(); r.status == solve_status::optimum; r = ls.next( r ) )
  {
    EXPECT_EQ( r.costs, ( std::vector<int64_t>{ 0 } ) );
    seen.insert( to_string( decode( r.model, p, s ).dag, ap ) );
  }
  EXPECT_EQ( seen, ( std::set<std::string>{ "p", "q" } ) );
}

/* enumeration until exhaustion yields each solution DAG exactly once, in nondecreasing cost */
TEST( MaxSat, EnumerationIsCompleteAtSmallBounds )
{
  std::mt19937_64 rng( 3 );
  prop_list ap( { "p0", "p1" } );
  std::vector<std::string> sources{ "" };
  for ( auto const& [name, src] : testkit::small_battery() )
    if ( name != "retention" && name != "weakening-shape" )
      sources.push_back( src );
  for ( auto const& src : sources )
    for ( int rep = 0; rep < 2; ++rep )
    {
      auto const prog = constraint::parse_constraints( src, ap );
      if ( prog.nodes.size() + 1 > 3 )
        continue;
      auto const s = testkit::random_sample( rng, ap, 3, 3, 0 );
      auto const p = encode_full( s, prog, config( 3 ) );

      std::set<std::string> want;
      testkit::enumerate_slot_dags( 3, 2, [&]( syntax_dag const& d ) {
        if ( consistent( d, s ) && constraint::holds_program( p.program, d ) )
          want.insert( dag_listing( d, ap ) );
      } );

      lex_solver<> ls( p );
      std::set<std::string> got;
      std::vector<int64_t> last;
      for ( auto r = ls.solve(); r.has_model(); r = ls.next( r ) )
      {
        auto const d = decode( r.model, p, s ).dag;
        EXPECT_TRUE( got.insert( dag_listing( d, ap ) ).second ) << "repeated " << to_string( d, ap );
        EXPECT_LE( last, r.costs );
        last = r.costs;
      }
      EXPECT_EQ( got, want ) << src;
    }
}

/* solutions are consistent, satisfy the constraints and report the costs the concrete evaluator computes */
TEST( MaxSat, SolutionsAreSoundAndOptimal )
{
  std::mt19937_64 rng( 17 );
  prop_list ap( { "p0", "p1" } );
  std::size_t solved = 0;
  for ( auto const& [name, src] : testkit::small_battery() )
    for ( int rep = 0; rep < 4; ++rep )
    {
      auto const prog = constraint::parse_constraints( src, ap );
      auto const s = testkit::random_sample( rng, ap, 3, 4 );
      auto const n = std::max<std::size_t>( 3, prog.nodes.size() + 1 );
      auto const p = encode_full( s, prog, config( n ) );
      auto const r = solve_lex( p );

      std::optional<std::vector<int64_t>> best;
      testkit::enumerate_slot_dags( n, 2, [&]( syntax_dag const& d ) {
        if ( !consistent( d, s ) )
          return;
        if ( auto c = constraint::check_program( p.program, d, n ); c && ( !best || c->costs < *best ) )
          best = c->costs;
      } );
      if ( !best )
      {
        EXPECT_EQ( r.status, solve_status::unsat ) << name;
        continue;
      }
      ASSERT_EQ( r.status, solve_status::optimum ) << name;
      ++solved;
      auto const sol = decode( r.model, p, s );
      EXPECT_TRUE( consistent( sol.dag, s ) );
      EXPECT_TRUE( constraint::holds_all( p.program, sol.dag, sol.w ) ) << name;
      EXPECT_EQ( constraint::layer_costs( p.program, sol.dag, sol.w, n ), r.costs ) << name;
      EXPECT_EQ( r.costs, *best ) << name << " " << to_string( sol.dag, ap );
    }
  EXPECT_GT( solved, 20u );
}

TEST( Wcnf, WeightsDominateLowerLayers )
{
  auto const p = raw_problem( 5, { { 1, 2 } }, { { 2, { 1, 2 } }, { 1, { 3, 4, 5 } } } );
  auto const w = to_wcnf( p );
  EXPECT_EQ( layer_weights( p ), ( std::vector<uint64_t>{ 4, 1 } ) );
  EXPECT_EQ( w.top, 12u );
  auto const single = raw_problem( 2, {}, { { 1, { 1, 2 } } } );
  for ( auto const& [weight, c] : to_wcnf( single ).soft )
    EXPECT_EQ( weight, 1u );

  std::mt19937_64 rng( 1 );
  for ( int round = 0; round < 100; ++round )
  {
    std::vector<std::pair<uint32_t, std::vector<int>>> layers;
    auto const k = std::uniform_int_distribution<int>( 1, 4 )( rng );
    for ( int i = k; i > 0; --i )
      layers.push_back( { static_cast<uint32_t>( i ), std::vector<int>( std::uniform_int_distribution<int>( 0, 9 )( rng ), 1 ) } );
    auto const q = raw_problem( 1, {}, layers );
    auto const ws = layer_weights( q );
    for ( std::size_t a = 0; a < ws.size(); ++a )
    {
      uint64_t below = 0;
      for ( std::size_t b = a + 1; b < ws.size(); ++b )
        below += ws[b] * q.layers[b].lits.size();
      EXPECT_GT( ws[a], below );
    }
  }
}

TEST( Wcnf, OverflowIsRefused )
{
  std::vector<std::pair<uint32_t, std::vector<int>>> layers;
  for ( uint32_t k = 30; k > 0; --k )
    layers.push_back( { k, std::vector<int>( 8, 1 ) } );
  EXPECT_THROW( to_wcnf( raw_problem( 1, {}, layers ) ), wcnf_error );
}

TEST( Wcnf, TextRoundTrip )
{
  auto const p = raw_problem( 3, { { 1, -2 }, { 3 } }, { { 2, { 1 } }, { 1, { -3, 2 } } } );
  auto const w = to_wcnf( p );
  auto const text = write_wcnf( w );
  EXPECT_EQ( text, "p wcnf 3 5 6\n6 1 -2 0\n6 3 0\n3 1 0\n1 -3 0\n1 2 0\n" );
  auto const back = read_wcnf( text );
  EXPECT_EQ( back.num_vars, 3 );
  EXPECT_EQ( back.top, 6u );
  EXPECT_EQ( back.hard, w.hard );
  EXPECT_EQ( back.soft, w.soft );

  auto const headerless = read_wcnf( "c new style\nh 1 -2 0\nh 3 0\n3 1 0\n1 -3 0\n" );
  EXPECT_EQ( headerless.hard.size(), 2u );
  EXPECT_EQ( headerless.soft.size(), 2u );
  EXPECT_EQ( headerless.num_vars, 3 );
  EXPECT_EQ( headerless.top, 5u );
  EXPECT_THROW( read_wcnf( "p wcnf 1 1 2\n2 1\n" ), wcnf_error );
}

TEST( Wcnf, ExternalModels )
{
  auto a = parse_external_model( "s OPTIMUM FOUND\nv 1 -2 0\n" );
  EXPECT_EQ( a.status, external_status::optimum );
  EXPECT_EQ( a.values, ( assignment{ 0, 1, 0 } ) );
  auto b = parse_external_model( "v 10", 2 );
  EXPECT_EQ( b.values, ( assignment{ 0, 1, 0 } ) );
  EXPECT_EQ( parse_external_model( "s UNSATISFIABLE\n" ).status, external_status::unsat );
  EXPECT_THROW( parse_external_model( "s OPTIMUM FOUND\n" ), wcnf_error );
  EXPECT_THROW( parse_external_model( "v 1 x 0\n" ), wcnf_error );
}

/* an exported instance solved elsewhere decodes to the same DAG and costs */
TEST( Wcnf, ExportedModelDecodesIdentically )
{
  auto const r = testkit::wcnf_round_trip( 23, []( std::string const& what ) { ADD_FAILURE() << what; } );
  EXPECT_EQ( r.mismatches, 0u );
  EXPECT_GT( r.cases, 5u );
}
