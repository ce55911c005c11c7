#include <cltl/constraint/parser.hpp>
#include <cltl/equivalence.hpp>
#include <cltl/io.hpp>
#include <cltl/learner.hpp>
#include <cltl/report.hpp>
#include <cltl/suite.hpp>

#include "support/random.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace cltl;
using testkit::lasso;

namespace
{

formula_ptr f( std::string_view text, prop_list const& ap ) { return parse_formula( text, ap ); }

bool same_up_to_numbering( syntax_dag const& a, syntax_dag const& b )
{
  for ( auto const& x : slot_renumberings( a ) )
    if ( x == b )
      return true;
  return false;
}

} // namespace

TEST( Io, ParsesTraceLines )
{
  auto const t = parse_trace_line( "0,0;1,0;0,1::1" );
  ASSERT_EQ( t.states.size(), 3u );
  EXPECT_EQ( t.loop_start, 1u );
  EXPECT_EQ( t.states[1], ( state{ true, false } ) );
  EXPECT_EQ( parse_trace_line( "1;0" ).loop_start, 1u );
  EXPECT_THROW( parse_trace_line( "0,2" ), input_error );
  EXPECT_THROW( parse_trace_line( "0,1;1" ), input_error );
  EXPECT_THROW( parse_trace_line( "0;1::2" ), input_error );
  EXPECT_THROW( parse_trace_line( "0;1::x" ), input_error );
  EXPECT_THROW( parse_trace_line( "0,1", 3 ), input_error );
}

TEST( Io, TraceFileBlocks )
{
  auto const s = parse_trace_file( "# comment\n0,1;1,1::0\n\n---\n1,0\n---\nready, done\n" );
  EXPECT_EQ( s.positives().size(), 1u );
  EXPECT_EQ( s.negatives().size(), 1u );
  EXPECT_EQ( s.ap()[1].name, "done" );

  auto const unnamed = parse_trace_file( "0,1\n---\n" );
  EXPECT_EQ( unnamed.ap().size(), 2u );
  EXPECT_EQ( unnamed.ap()[0].name, "p0" );

  try
  {
    parse_trace_file( "0,1\n1\n" );
    FAIL() << "width mismatch accepted";
  }
  catch ( input_error const& e )
  {
    EXPECT_NE( std::string( e.what() ).find( "line 2" ), std::string::npos ) << e.what();
  }
  EXPECT_THROW( parse_trace_file( "0;1::0\n---\n0;1;0::1\n" ), input_error ); /* the same word twice */
  EXPECT_THROW( parse_trace_file( "1\n---\n1\n---\np\n---\n1\n" ), input_error );
  EXPECT_THROW( parse_trace_file( "1\n---\n1\n---\np, q\n" ), input_error );
}

TEST( Io, FormatRoundTrip )
{
  std::mt19937_64 rng( 4 );
  prop_list ap( { "a", "b", "c" } );
  for ( int i = 0; i < 50; ++i )
  {
    auto const s = testkit::random_sample( rng, ap, 5, 6, 0 );
    auto const back = parse_trace_file( format_trace_file( s ) );
    ASSERT_EQ( back.size(), s.size() );
    for ( std::size_t t = 0; t < s.size(); ++t )
    {
      EXPECT_EQ( back.trace( t ).states(), s.trace( t ).states() );
      EXPECT_EQ( back.trace( t ).loop_start(), s.trace( t ).loop_start() );
      EXPECT_EQ( back.is_positive( t ), s.is_positive( t ) );
    }
  }
}

TEST( Io, ConstraintFilesSeePresetNodes )
{
  prop_list ap( { "a", "b" } );
  auto const p = load_program( { { "pairs.txt", "constraint l(lp_imp) -> l(lp_f) in { (a, b) };\n" } }, { "liveness-pattern" }, ap );
  EXPECT_EQ( p.nodes.size(), 3u );
  EXPECT_TRUE( constraint::holds_program( p, formula_to_dag( *f( "G(a -> F b)", ap ), true ) ) );
  EXPECT_FALSE( constraint::holds_program( p, formula_to_dag( *f( "G(b -> F a)", ap ), true ) ) );

  try
  {
    load_program( { { "bad.txt", "constraint root in nowhere;\n" } }, {}, ap );
    FAIL() << "unknown name accepted";
  }
  catch ( input_error const& e )
  {
    EXPECT_NE( std::string( e.what() ).find( "bad.txt:1" ), std::string::npos ) << e.what();
  }
  EXPECT_THROW( load_program( {}, { "no-such-preset" }, ap ), input_error );
  EXPECT_THROW( load_program( { { "x", "node lp_g : N[G];\n" } }, { "liveness-pattern" }, ap ), input_error );
}

TEST( Equivalence, MatchKinds )
{
  prop_list ap( { "cs0", "cs1" } );
  auto const target = f( "G(!(cs0 & cs1))", ap );
  EXPECT_EQ( matches_target( f( "G(!(cs1 & cs0))", ap ), target, 2 ), match_kind::literal );
  EXPECT_EQ( matches_target( f( "G(cs0 -> !cs1)", ap ), target, 2 ), match_kind::semantic );
  EXPECT_EQ( matches_target( f( "G(!cs0)", ap ), target, 2 ), match_kind::none );
  EXPECT_EQ( matches_target( f( "F cs0 & F cs1", ap ), f( "F cs1 & F cs0", ap ), 2 ), match_kind::literal );
}

TEST( Equivalence, ImplicationOnSamples )
{
  prop_list ap( { "a", "b", "c" } );
  auto const traces = random_lassos( 3, semantic_samples, semantic_max_length, 1 );
  auto const strong = f( "G(a -> b)", ap );
  auto const weak = f( "G(a & c -> b)", ap );
  EXPECT_TRUE( implies_on( *strong, *weak, traces ) );
  EXPECT_FALSE( implies_on( *weak, *strong, traces ) );
  EXPECT_TRUE( agree_on( *f( "!F a", ap ), *f( "G !a", ap ), traces ) );
}

TEST( Equivalence, RandomLassosAreReproducible )
{
  auto const a = random_lassos( 2, 200, semantic_max_length, 3 );
  auto const b = random_lassos( 2, 200, semantic_max_length, 3 );
  ASSERT_EQ( a.size(), 200u );
  for ( std::size_t i = 0; i < a.size(); ++i )
  {
    EXPECT_EQ( a[i].states(), b[i].states() );
    EXPECT_EQ( a[i].loop_start(), b[i].loop_start() );
    EXPECT_LE( a[i].length(), semantic_max_length );
  }
}

TEST( Learner, SinglePositiveAtom )
{
  prop_list ap( { "p" } );
  sample s( ap, { lasso( { "1" }, 0 ) }, {} );
  learn_options o;
  o.max_nodes = 2;
  auto const out = learn( s, {}, o );
  ASSERT_EQ( out.status, learn_status::solved );
  EXPECT_EQ( to_string( out.solutions.front().dag, ap ), "p" );
  EXPECT_TRUE( out.solutions.front().check.all() );
}

TEST( Learner, EmptySampleGivesAnAtom )
{
  prop_list ap( { "p", "q" } );
  learn_options o;
  o.max_nodes = 1;
  auto const out = learn( sample( ap, {}, {} ), {}, o );
  ASSERT_EQ( out.status, learn_status::solved );
  EXPECT_EQ( out.solutions.front().dag.nodes.size(), 1u );
}

TEST( Learner, EnumerationIsDistinctAndGrows )
{
  prop_list ap( { "p" } );
  sample s( ap, { lasso( { "1" }, 0 ) }, {} );
  learn_options o;
  o.max_nodes = 3;
  auto const out = enumerate_solutions( s, {}, o, 40 );
  ASSERT_EQ( out.status, learn_status::solved );
  ASSERT_GE( out.solutions.size(), 3u );
  EXPECT_EQ( dag_size( out.solutions[0].dag ), 1u );
  for ( std::size_t i = 0; i < out.solutions.size(); ++i )
  {
    EXPECT_TRUE( out.solutions[i].check.all() );
    if ( i )
    {
      EXPECT_LE( dag_size( out.solutions[i - 1].dag ), dag_size( out.solutions[i].dag ) );
    }
    for ( std::size_t j = 0; j < i; ++j )
      EXPECT_FALSE( same_up_to_numbering( out.solutions[i].dag, out.solutions[j].dag ) )
          << to_string( out.solutions[i].dag, ap ) << " repeated";
  }
}

TEST( Learner, LimitZeroAndStatuses )
{
  prop_list ap( { "p" } );
  /* positive: p false then always true; negative: p always false */
  sample s( ap, { lasso( { "0", "1" }, 1 ) }, { lasso( { "0" }, 0 ) } );
  learn_options o;
  EXPECT_EQ( enumerate_solutions( s, {}, o, 0 ).solutions.size(), 0u );

  o.max_nodes = 1;
  EXPECT_EQ( learn( s, {}, o ).status, learn_status::unsat );

  o.max_nodes = 5;
  o.iterative = true;
  auto const it = learn( s, {}, o );
  ASSERT_EQ( it.status, learn_status::solved );
  EXPECT_EQ( it.bound, 2u );
  EXPECT_EQ( dag_size( it.solutions.front().dag ), 2u ); /* F p and X p both separate */
  EXPECT_TRUE( it.solutions.front().check.all() );

  o.iterative = false;
  o.deadline = std::chrono::steady_clock::now() - std::chrono::seconds( 1 );
  EXPECT_EQ( learn( s, {}, o ).status, learn_status::timeout );
}

TEST( Learner, VerificationReportsEachFailure )
{
  prop_list ap( { "p" } );
  sample s( ap, { lasso( { "0", "1" }, 1 ) }, { lasso( { "0" }, 0 ) } );
  auto const p = constraint::parse_constraints( "constraint root in N[G];\n", ap );
  auto const d = to_slot_form( formula_to_dag( *f( "X p", ap ), true ) );
  auto const v = verify_solution( s, p, d, {}, 2 );
  EXPECT_TRUE( v.sample_ok );
  ASSERT_EQ( v.constraints.size(), 1u );
  EXPECT_FALSE( v.constraints[0] );
  EXPECT_FALSE( v.all() );
  auto const g = to_slot_form( formula_to_dag( *f( "G p", ap ), true ) );
  auto const w = verify_solution( s, p, g, {}, 2 );
  EXPECT_EQ( w.misclassified, ( std::vector<std::size_t>{ 0 } ) );
}

TEST( Learner, WitnessPrefersSatisfyingPlacements )
{
  prop_list ap( { "a", "b" } );
  auto const p = constraint::preset( "liveness-pattern", ap );
  auto const d = to_slot_form( formula_to_dag( *f( "G(a -> F b)", ap ), true ) );
  auto const w = choose_witness( p, d );
  for ( auto const& c : p.constraints )
    EXPECT_TRUE( constraint::holds( p, *c, d, w ) );
}

TEST( Report, MachineKeys )
{
  prop_list ap( { "p" } );
  sample s( ap, { lasso( { "0", "1" }, 1 ) }, { lasso( { "0" }, 0 ) } );
  learn_options o;
  o.max_nodes = 3;
  auto const out = learn( s, {}, o );
  ASSERT_EQ( out.status, learn_status::solved );
  auto const text = render_solution( out.solutions.front(), out.program, out.priorities, ap, output_format::machine );
  for ( auto const* key : { "solution: 1\n", "formula: ", "nodes: ", "tree-size: ", "dag: ", "cost[1]: ", "check.sample: pass\n",
                            "check.costs: pass\n" } )
    EXPECT_NE( text.find( key ), std::string::npos ) << key;
  auto const summary = render_summary( out, output_format::machine );
  EXPECT_NE( summary.find( "status: solved\n" ), std::string::npos );
  EXPECT_NE( summary.find( "bound: 3\n" ), std::string::npos );
}

TEST( Suites, ShippedSuitesLoad )
{
  auto const dirs = find_suites( CLTL_SUITES_DIR );
  std::set<std::string> names;
  for ( auto const& d : dirs )
  {
    auto const s = load_suite( d );
    names.insert( s.name );
    auto const in = load_suite_inputs( s );
    EXPECT_FALSE( in.expected.empty() ) << s.name;
    EXPECT_GT( in.smp.size(), 1u ) << s.name;
  }
  EXPECT_EQ( names, ( std::set<std::string>{ "peterson-deadlockfree", "peterson-mutex", "robot-repair", "therac-weakening", "voting" } ) );
}

TEST( Suites, ExpectedFormulasAreConsistentWithTheirSuites )
{
  for ( auto const& d : find_suites( CLTL_SUITES_DIR ) )
  {
    auto const s = load_suite( d );
    auto const in = load_suite_inputs( s );
    for ( auto const& e : in.expected )
    {
      auto const dag = to_slot_form( formula_to_dag( *e, true ) );
      EXPECT_TRUE( consistent( dag, in.smp ) ) << s.name << ": " << to_string( *e, in.smp.ap() );
      auto const w = choose_witness( in.program, dag );
      EXPECT_TRUE( constraint::holds_all( in.program, dag, w ) ) << s.name << ": " << to_string( *e, in.smp.ap() );
    }
  }
}

TEST( Suites, WeakeningSuitePasses )
{
  auto const r = run_suite( load_suite( std::string( CLTL_SUITES_DIR ) + "/therac-weakening" ) );
  EXPECT_TRUE( r.passed );
  EXPECT_TRUE( r.missing.empty() );
}
