#include <cltl/constraint/parser.hpp>
#include <cltl/encoder.hpp>

#include "support/battery.hpp"
#include "support/properties.hpp"
#include "support/random.hpp"
#include "support/solver.hpp"
#include "support/structures.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace cltl;
using testkit::forced;
using testkit::lasso;

namespace
{

encoding_config bare( std::size_t n )
{
  encoding_config c;
  c.max_nodes = n;
  c.default_size = false;
  return c;
}

std::set<std::string> printed( std::vector<syntax_dag> const& ds, prop_list const& ap )
{
  std::set<std::string> out;
  for ( auto const& d : ds )
    out.insert( to_string( d, ap ) );
  return out;
}

} // namespace

TEST( Encoder, SingleSlotOnlyAdmitsAtoms )
{
  prop_list ap( { "p" } );
  sample s( ap, {}, {} );
  auto const p = encode_full( s, {}, bare( 1 ) );
  auto const all = testkit::all_structures( p, s );
  ASSERT_EQ( all.size(), 1u );
  EXPECT_EQ( to_string( all[0], ap ), "p" );
}

TEST( Encoder, UnusedSlotsCarryNothing )
{
  prop_list ap( { "p", "q" } );
  sample s( ap, {}, {} );
  auto const p = encode_full( s, {}, bare( 3 ) );
  auto solver = testkit::load_hard( p );
  auto const& m = p.vars;
  for ( std::size_t i = 1; i < 3; ++i )
  {
    std::vector<int> assume{ -m.used[1] };
    for ( auto l : m.label[i] )
      EXPECT_TRUE( forced( solver, assume, -l ) );
    for ( std::size_t j = 0; j < i; ++j )
    {
      EXPECT_TRUE( forced( solver, assume, -m.child_l[i][j] ) );
      EXPECT_TRUE( forced( solver, assume, -m.child_r[i][j] ) );
    }
  }
}

TEST( Encoder, NegationTakesExactlyALeftChild )
{
  prop_list ap( { "p" } );
  sample s( ap, {}, {} );
  auto const p = encode_full( s, {}, bare( 2 ) );
  auto solver = testkit::load_hard( p );
  std::vector<int> assume{ p.vars.label[1][label::of_op( op::not_ ).index()] };
  EXPECT_TRUE( forced( solver, assume, p.vars.child_l[1][0] ) );
  EXPECT_TRUE( forced( solver, assume, -p.vars.child_r[1][0] ) );
}

TEST( Encoder, TraceValuesOfAtomsAndEventually )
{
  /* states {}, {x1}, {x2} with the loop back to position 1 */
  prop_list ap( { "x1", "x2" } );
  auto const t = lasso( { "00", "10", "01" }, 1 );
  {
    sample s( ap, {}, { t } );
    auto const p = encode_full( s, {}, bare( 1 ) );
    auto solver = testkit::load_hard( p );
    std::vector<int> assume{ p.vars.label[0][label::of_prop( 0 ).index()] };
    EXPECT_TRUE( forced( solver, assume, p.vars.sem[0][0][1] ) );
    EXPECT_TRUE( forced( solver, assume, -p.vars.sem[0][0][0] ) );
    EXPECT_TRUE( forced( solver, assume, -p.vars.sem[0][0][2] ) );
  }
  {
    sample s( ap, { t }, {} );
    auto const p = encode_full( s, {}, bare( 2 ) );
    auto solver = testkit::load_hard( p );
    auto const& m = p.vars;
    std::vector<int> assume{ m.used[1], m.label[1][label::of_op( op::finally ).index()], m.label[0][label::of_prop( 1 ).index()] };
    ASSERT_EQ( solver.solve( assume ), sat_result::sat );
    for ( std::size_t k = 0; k < 3; ++k )
      EXPECT_TRUE( forced( solver, assume, m.sem[0][1][k] ) );
  }
}

TEST( Encoder, SamplePinsTheRoot )
{
  prop_list ap( { "p", "q" } );
  sample s( ap, { lasso( { "10" }, 0 ) }, {} );
  auto const p = encode_full( s, {}, bare( 1 ) );
  auto solver = testkit::load_hard( p );
  EXPECT_TRUE( forced( solver, {}, p.vars.sem[0][0][0] ) );
  EXPECT_TRUE( forced( solver, {}, p.vars.label[0][label::of_prop( 0 ).index()] ) );
  auto const all = testkit::all_structures( p, s );
  ASSERT_EQ( all.size(), 1u );
  EXPECT_EQ( to_string( all[0], ap ), "p" );
}

TEST( Encoder, ModelsAtTwoSlotsAreTheSeparatingFormulas )
{
  prop_list ap( { "p" } );
  auto const late = lasso( { "0", "1" }, 1 );
  auto const never = lasso( { "0" }, 0 );
  {
    sample s( ap, { late }, { never } );
    auto const p = encode_full( s, {}, bare( 2 ) );
    EXPECT_EQ( printed( testkit::all_structures( p, s ), ap ), ( std::set<std::string>{ "F p", "X p" } ) );
  }
  {
    /* a trace where p holds at once but not at the next step removes X p */
    sample s( ap, { late, lasso( { "1", "0", "1" }, 1 ) }, { never } );
    auto const p = encode_full( s, {}, bare( 2 ) );
    EXPECT_EQ( printed( testkit::all_structures( p, s ), ap ), ( std::set<std::string>{ "F p" } ) );
  }
}

TEST( Encoder, DecodeReadsTheStructure )
{
  prop_list ap( { "p", "q" } );
  sample s( ap, {}, {} );
  auto const p = encode_full( s, {}, bare( 4 ) );
  auto const f = parse_formula( "p & q", ap );
  auto const d = to_slot_form( formula_to_dag( *f, true ) );
  auto const a = assignment_from_dag( p, s, d );
  EXPECT_TRUE( satisfies( p.hard, a ) );
  auto const back = decode( a, p, s );
  EXPECT_EQ( back.dag, d );
  EXPECT_EQ( to_string( back.dag, ap ), "p & q" );
}

TEST( Encoder, NoSampleMeansNoSampleClauses )
{
  prop_list ap( { "p" } );
  sample s( ap, {}, {} );
  auto const p = encode_full( s, {}, bare( 3 ) );
  for ( int v = 1; v <= p.vars.num_vars(); ++v )
    EXPECT_NE( p.vars.meaning( v ).kind, var_kind::sem );
}

TEST( Encoder, BoundTooSmallForDeclaredNodes )
{
  prop_list ap( { "p" } );
  sample s( ap, {}, {} );
  auto const prog = constraint::parse_constraints( "node a : N[G]; node b : N[F];", ap );
  EXPECT_THROW( encode_full( s, prog, bare( 2 ) ), encoding_error );
  EXPECT_NO_THROW( encode_full( s, prog, bare( 3 ) ) );
}

TEST( Encoder, DefaultObjectiveCountsEdges )
{
  prop_list ap( { "p", "q" } );
  sample s( ap, {}, {} );
  encoding_config cfg;
  cfg.max_nodes = 4;
  auto const p = encode_full( s, {}, cfg );
  ASSERT_EQ( p.layers.size(), 1u );
  auto const d = to_slot_form( formula_to_dag( *parse_formula( "G (p U q)", ap ), true ) );
  EXPECT_EQ( layer_costs( p, assignment_from_dag( p, s, d ) ), ( std::vector<int64_t>{ 3 } ) );
}

/* semantic clauses force exactly the evaluator's truth table once the structure is pinned */
TEST( Encoder, PinnedStructureForcesTheTruthTable )
{
  auto const r = testkit::pinned_truth_tables( 11, 40, []( std::string const& what ) { ADD_FAILURE() << what; } );
  EXPECT_EQ( r.mismatches, 0u );
  EXPECT_GT( r.checks, 200u );
}

/* an assignment built from a DAG satisfies the hard clauses exactly when the DAG is a solution */
TEST( Encoder, ConstructedAssignmentsMatchTheSolutions )
{
  std::size_t solutions = 0;
  auto const r = testkit::constructed_assignments( 5, 3, 1, &solutions, []( std::string const& what ) { ADD_FAILURE() << what; } );
  EXPECT_EQ( r.mismatches, 0u );
  EXPECT_GT( solutions, 100u );
  EXPECT_GT( r.checks - solutions, 1000u );
}
