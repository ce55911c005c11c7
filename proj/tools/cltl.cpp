// Command-line front end: learning, enumeration, verification, WCNF exchange,
// the brute-force oracle and the example-suite runner.

#include <cltl/brute_force.hpp>
#include <cltl/io.hpp>
#include <cltl/learner.hpp>
#include <cltl/maxsat.hpp>
#include <cltl/report.hpp>
#include <cltl/suite.hpp>

#include <CLI11.hpp>

#include <iostream>

using namespace cltl;

namespace
{

enum exit_code : int
{
  exit_ok = 0,
  exit_unsat = 1,
  exit_input = 2,
  exit_timeout = 3,
  exit_verification = 4,
};

struct common_args
{
  std::string traces;
  std::vector<std::string> constraint_files;
  std::vector<std::string> presets;
  std::string output = "human";

  output_format format() const { return output == "machine" ? output_format::machine : output_format::human; }
};

struct encoding_args
{
  std::size_t max_nodes = 5;
  bool no_default_size = false;
  bool tree = false;
  bool iterative = false;
  double timeout = 0;

  learn_options options() const
  {
    learn_options o;
    o.max_nodes = max_nodes;
    o.default_size = !no_default_size;
    o.tree_mode = tree;
    o.iterative = iterative;
    if ( timeout > 0 )
      o.deadline = std::chrono::steady_clock::now() + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                                          std::chrono::duration<double>( timeout ) );
    return o;
  }
};

void add_common( CLI::App* cmd, common_args& a, bool constraints = true )
{
  cmd->add_option( "traces", a.traces, "Trace file" )->required();
  if ( constraints )
  {
    cmd->add_option( "-c,--constraints", a.constraint_files, "Constraint file (repeatable)" );
    cmd->add_option( "-p,--preset", a.presets, "Built-in constraint preset (repeatable)" );
  }
  cmd->add_option( "--output", a.output, "Report format" )->check( CLI::IsMember( { "human", "machine" } ) );
}

void add_encoding( CLI::App* cmd, encoding_args& e, bool search = true )
{
  cmd->add_option( "-n,--max-nodes", e.max_nodes, "Node bound" )->check( CLI::Range( 1, 64 ) );
  cmd->add_flag( "--no-default-size", e.no_default_size, "Drop the default edge-count objective" );
  cmd->add_flag( "--tree", e.tree, "Forbid sharing of non-atomic subformulas (no-dag-reuse preset)" );
  if ( search )
  {
    cmd->add_flag( "--iterative", e.iterative, "Grow the bound from 1 until satisfiable, then optimize there" );
    cmd->add_option( "--timeout", e.timeout, "Time budget in seconds (0: unlimited)" )->check( CLI::NonNegativeNumber );
  }
}

struct inputs
{
  sample smp;
  constraint::program program;
};

inputs load_inputs( common_args const& a )
{
  inputs in;
  in.smp = parse_trace_file( read_file( a.traces ) );
  std::vector<std::pair<std::string, std::string>> texts;
  for ( auto const& f : a.constraint_files )
    texts.emplace_back( f, read_file( f ) );
  in.program = load_program( texts, a.presets, in.smp.ap() );
  return in;
}

int exit_for( learn_status s )
{
  switch ( s )
  {
  case learn_status::solved: return exit_ok;
  case learn_status::unsat: return exit_unsat;
  case learn_status::timeout: return exit_timeout;
  case learn_status::verification_failed: return exit_verification;
  }
  return exit_verification;
}

int run_search( common_args const& a, encoding_args const& e, std::size_t limit, bool co_optimal )
{
  auto const in = load_inputs( a );
  auto opts = e.options();
  opts.co_optimal = co_optimal;
  auto const f = a.format();
  /* the program with presets applied is only known after encoding; print as solutions arrive */
  auto const shown = effective_program( in.program, { opts.max_nodes, opts.default_size, opts.tree_mode }, in.smp.ap() );
  auto const priorities = shown.priorities();
  auto const out = enumerate_solutions( in.smp, in.program, opts, limit, [&]( solution const& s ) {
    std::cout << render_solution( s, shown, priorities, in.smp.ap(), f );
    if ( f == output_format::machine )
      std::cout << "\n";
    std::cout.flush();
  } );
  std::cout << render_summary( out, f );
  if ( limit == 0 )
    return exit_ok;
  if ( out.status == learn_status::unsat && !out.solutions.empty() )
    return exit_ok;
  return exit_for( out.status );
}

int run_verify( common_args const& a, std::string const& text, std::optional<std::size_t> bound )
{
  auto const in = load_inputs( a );
  formula_ptr f;
  try
  {
    f = parse_formula( text, in.smp.ap() );
  }
  catch ( parse_error const& e )
  {
    throw input_error( std::string( "formula: " ) + e.what() );
  }
  solution sol;
  sol.dag = to_slot_form( formula_to_dag( *f, true ) );
  sol.w = choose_witness( in.program, sol.dag );
  auto const n = bound.value_or( sol.dag.nodes.size() );
  sol.check = verify_solution( in.smp, in.program, sol.dag, sol.w, n );
  sol.costs = constraint::layer_costs( in.program, sol.dag, sol.w, n );
  std::cout << render_solution( sol, in.program, in.program.priorities(), in.smp.ap(), a.format() );
  bool const ok = sol.check.all();
  if ( a.format() == output_format::machine )
    std::cout << "status: " << ( ok ? "pass" : "fail" ) << "\n";
  else
    std::cout << ( ok ? "verified\n" : "verification failed\n" );
  return ok ? exit_ok : exit_unsat;
}

int run_export( common_args const& a, encoding_args const& e, std::string const& path )
{
  auto const in = load_inputs( a );
  auto const cnf = encode_full( in.smp, in.program, { e.max_nodes, !e.no_default_size, e.tree } );
  auto const w = to_wcnf( cnf );
  write_file( path, write_wcnf( w ) );
  write_file( path + ".vars", write_var_map( cnf, in.smp.ap() ) );
  if ( a.format() == output_format::machine )
    std::cout << "wcnf: " << path << "\nvars: " << w.num_vars << "\nhard: " << w.hard.size() << "\nsoft: " << w.soft.size()
              << "\ntop: " << w.top << "\n";
  else
    std::cout << "wrote " << path << " (" << w.num_vars << " variables, " << w.hard.size() << " hard and " << w.soft.size()
              << " soft clauses) and " << path << ".vars\n";
  return exit_ok;
}

int run_import( common_args const& a, encoding_args const& e, std::string const& model_path )
{
  auto const in = load_inputs( a );
  auto const cnf = encode_full( in.smp, in.program, { e.max_nodes, !e.no_default_size, e.tree } );
  external_model m;
  try
  {
    m = parse_external_model( read_file( model_path ), cnf.vars.num_vars() );
  }
  catch ( wcnf_error const& err )
  {
    throw input_error( model_path + ": " + err.what() );
  }
  if ( m.status == external_status::unsat )
  {
    std::cout << ( a.format() == output_format::machine ? "status: unsat\n" : "the external solver reports UNSAT\n" );
    return exit_unsat;
  }
  if ( m.values.size() < static_cast<std::size_t>( cnf.vars.num_vars() ) + 1 )
    m.values.resize( static_cast<std::size_t>( cnf.vars.num_vars() ) + 1, 0 );
  if ( !satisfies( cnf.hard, m.values ) )
  {
    std::cerr << "error: the model violates hard clauses of this encoding (different inputs or flags?)\n";
    return exit_verification;
  }
  solution sol;
  try
  {
    auto dec = decode( m.values, cnf, in.smp );
    sol.dag = std::move( dec.dag );
    sol.w = std::move( dec.w );
  }
  catch ( decode_error const& err )
  {
    std::cerr << "error: " << err.what() << "\n";
    return exit_verification;
  }
  sol.costs = layer_costs( cnf, m.values );
  sol.check = verify_solution( in.smp, cnf.program, sol.dag, sol.w, e.max_nodes, sol.costs );
  std::cout << render_solution( sol, cnf.program, cnf.program.priorities(), in.smp.ap(), a.format() );
  return sol.check.all() ? exit_ok : exit_verification;
}

int run_oracle( common_args const& a, std::size_t max_size, bool force, std::string const& sharing_name )
{
  if ( max_size > 8 && !force )
    throw input_error( "--max-size above 8 can take very long; pass --force to run it anyway" );
  auto const in = load_inputs( a );
  auto const mode = sharing_name == "none" ? sharing::none : sharing_name == "atoms" ? sharing::atoms : sharing::full;
  auto const has_filter = !in.program.constraints.empty() || !in.program.nodes.empty();
  auto const found = brute_force_min_consistent( in.smp, max_size, [&]( formula const& f ) {
    return !has_filter || constraint::holds_program( in.program, formula_to_dag( f, mode ) );
  } );
  if ( !found )
  {
    std::cout << ( a.format() == output_format::machine ? "status: none\n" : "no consistent formula within the size bound\n" );
    return exit_unsat;
  }
  auto const text = to_string( **found, in.smp.ap() );
  auto const size = tree_size( **found );
  if ( a.format() == output_format::machine )
    std::cout << "status: found\nformula: " << text << "\ntree-size: " << size << "\n";
  else
    std::cout << text << "  (tree size " << size << ")\n";
  return exit_ok;
}

int run_bench( std::string const& root, std::vector<std::string> const& names, output_format f )
{
  std::vector<std::filesystem::path> dirs;
  if ( names.empty() )
    dirs = find_suites( root );
  else
    for ( auto const& n : names )
      dirs.push_back( std::filesystem::path( root ) / n );
  bool all = true;
  for ( auto const& d : dirs )
  {
    auto const r = run_suite( load_suite( d ) );
    all = all && r.passed;
    if ( f == output_format::machine )
    {
      std::cout << "suite: " << r.name << "\nresult: " << ( r.passed ? "pass" : "fail" ) << "\nstatus: " << status_name( r.outcome.status )
                << "\nseconds: " << format_seconds( r.seconds ) << "\n";
      for ( auto const& x : r.learned )
        std::cout << "learned: " << x << "\n";
      for ( auto const& x : r.found )
        std::cout << "found: " << x << "\n";
      for ( auto const& x : r.missing )
        std::cout << "missing: " << x << "\n";
      std::cout << "\n";
    }
    else
    {
      std::cout << ( r.passed ? "PASS " : "FAIL " ) << r.name << "  " << format_seconds( r.seconds ) << " s  ("
                << status_name( r.outcome.status ) << ", " << r.outcome.solutions.size() << " solution"
                << ( r.outcome.solutions.size() == 1 ? "" : "s" ) << ")\n";
      for ( auto const& x : r.learned )
        std::cout << "     learned " << x << "\n";
      for ( auto const& x : r.found )
        std::cout << "     found   " << x << "\n";
      for ( auto const& x : r.missing )
        std::cout << "     missing " << x << "\n";
    }
    std::cout.flush();
  }
  return all ? exit_ok : exit_unsat;
}

} // namespace

int main( int argc, char** argv )
{
  CLI::App app{ "Learn LTL formulas from example traces under syntactic constraints and objectives" };
  app.require_subcommand( 1 );

  common_args common;
  encoding_args enc;

  auto* learn_cmd = app.add_subcommand( "learn", "Learn one optimal formula" );
  add_common( learn_cmd, common );
  add_encoding( learn_cmd, enc );

  std::size_t limit = 10;
  bool co_optimal = false;
  auto* enum_cmd = app.add_subcommand( "enumerate", "Enumerate distinct solutions, best first" );
  add_common( enum_cmd, common );
  add_encoding( enum_cmd, enc );
  enum_cmd->add_option( "--limit", limit, "Maximum number of solutions" );
  enum_cmd->add_flag( "--co-optimal", co_optimal, "Only solutions with the optimal costs" );

  std::string formula_text;
  std::optional<std::size_t> verify_bound;
  auto* verify_cmd = app.add_subcommand( "verify", "Check a formula against the traces and constraints" );
  add_common( verify_cmd, common );
  verify_cmd->add_option( "-f,--formula", formula_text, "Formula to check" )->required();
  verify_cmd->add_option( "-n,--max-nodes", verify_bound, "Bound used for maximize costs (default: the formula's size)" );

  std::string wcnf_path;
  auto* export_cmd = app.add_subcommand( "export-wcnf", "Write the MaxSAT instance for an external solver" );
  add_common( export_cmd, common );
  add_encoding( export_cmd, enc, false );
  export_cmd->add_option( "--wcnf", wcnf_path, "Output path (the variable map goes to <path>.vars)" )->required();

  std::string model_path;
  auto* import_cmd = app.add_subcommand( "import-model", "Decode and verify a model from an external solver" );
  add_common( import_cmd, common );
  add_encoding( import_cmd, enc, false );
  import_cmd->add_option( "--model", model_path, "Solver output file" )->required();

  std::size_t max_size = 6;
  bool force = false;
  std::string sharing_name = "full";
  auto* oracle_cmd = app.add_subcommand( "oracle", "Smallest consistent formula by exhaustive search" );
  add_common( oracle_cmd, common );
  oracle_cmd->add_option( "-s,--max-size", max_size, "Largest tree size to try" );
  oracle_cmd->add_flag( "--force", force, "Allow sizes above 8" );
  oracle_cmd->add_option( "--sharing", sharing_name, "DAG form on which constraints are checked" )
      ->check( CLI::IsMember( { "none", "atoms", "full" } ) );

  std::string suites_root = "suites";
  std::vector<std::string> suite_names;
  std::string bench_output = "human";
  auto* bench_cmd = app.add_subcommand( "bench", "Run the example suites" );
  bench_cmd->add_option( "--suites", suites_root, "Directory holding the suites" );
  bench_cmd->add_option( "names", suite_names, "Suites to run (default: all)" );
  bench_cmd->add_option( "--output", bench_output, "Report format" )->check( CLI::IsMember( { "human", "machine" } ) );

  try
  {
    app.parse( argc, argv );
  }
  catch ( CLI::ParseError const& e )
  {
    return app.exit( e ) == 0 ? exit_ok : exit_input;
  }

  try
  {
    if ( *learn_cmd )
      return run_search( common, enc, 1, false );
    if ( *enum_cmd )
      return run_search( common, enc, limit, co_optimal );
    if ( *verify_cmd )
      return run_verify( common, formula_text, verify_bound );
    if ( *export_cmd )
      return run_export( common, enc, wcnf_path );
    if ( *import_cmd )
      return run_import( common, enc, model_path );
    if ( *oracle_cmd )
      return run_oracle( common, max_size, force, sharing_name );
    if ( *bench_cmd )
      return run_bench( suites_root, suite_names, bench_output == "machine" ? output_format::machine : output_format::human );
  }
  catch ( input_error const& e )
  {
    std::cerr << "error: " << e.what() << "\n";
    return exit_input;
  }
  catch ( parse_error const& e )
  {
    std::cerr << "error: " << e.what() << "\n";
    return exit_input;
  }
  catch ( encoding_error const& e )
  {
    std::cerr << "error: " << e.what() << "\n";
    return exit_input;
  }
  catch ( wcnf_error const& e )
  {
    std::cerr << "error: " << e.what() << "\n";
    return exit_input;
  }
  catch ( decode_error const& e )
  {
    std::cerr << "internal error: " << e.what() << "\n";
    return exit_verification;
  }
  return exit_ok;
}
