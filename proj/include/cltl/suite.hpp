/*!
  \file suite.hpp
  \brief Example suites: a trace file, constraint files and expected solutions

  A suite directory holds `suite.json`, for example

      { "command": "enumerate", "traces": "traces.txt",
        "constraints": ["shape.cltl"], "presets": [], "max_nodes": 6,
        "limit": 10, "expected": "expected.txt", "time_limit": 60 }

  and the expected-solutions file lists one formula per line. A `learn`
  suite passes when its solution matches one of them; an `enumerate` suite
  passes when every expected formula matches some enumerated solution.
*/

#pragma once

#include "equivalence.hpp"
#include "io.hpp"
#include "learner.hpp"

#include <json.hpp>

#include <filesystem>

namespace cltl
{

struct suite_config
{
  std::string name;
  std::filesystem::path dir;
  std::string command = "learn";
  std::string traces = "traces.txt";
  std::vector<std::string> constraints;
  std::vector<std::string> presets;
  std::string expected = "expected.txt";
  learn_options options;
  std::size_t limit = 10;
  double time_limit = 60;
};

inline suite_config load_suite( std::filesystem::path const& dir )
{
  suite_config s;
  s.dir = dir;
  s.name = dir.filename().string();
  nlohmann::json j;
  try
  {
    j = nlohmann::json::parse( read_file( ( dir / "suite.json" ).string() ) );
    s.command = j.value( "command", s.command );
    s.traces = j.value( "traces", s.traces );
    s.constraints = j.value( "constraints", s.constraints );
    s.presets = j.value( "presets", s.presets );
    s.expected = j.value( "expected", s.expected );
    s.options.max_nodes = j.value( "max_nodes", s.options.max_nodes );
    s.options.default_size = j.value( "default_size", s.options.default_size );
    s.options.tree_mode = j.value( "tree", s.options.tree_mode );
    s.options.iterative = j.value( "iterative", s.options.iterative );
    s.limit = j.value( "limit", s.limit );
    s.time_limit = j.value( "time_limit", s.time_limit );
  }
  catch ( nlohmann::json::exception const& e )
  {
    throw input_error( ( dir / "suite.json" ).string() + ": " + e.what() );
  }
  if ( s.command != "learn" && s.command != "enumerate" )
    throw input_error( s.name + ": unknown command '" + s.command + "'" );
  return s;
}

struct suite_inputs
{
  sample smp;
  constraint::program program;
  std::vector<formula_ptr> expected;
};

inline suite_inputs load_suite_inputs( suite_config const& s )
{
  suite_inputs in;
  in.smp = parse_trace_file( read_file( ( s.dir / s.traces ).string() ) );
  std::vector<std::pair<std::string, std::string>> texts;
  for ( auto const& c : s.constraints )
    texts.emplace_back( c, read_file( ( s.dir / c ).string() ) );
  in.program = load_program( texts, s.presets, in.smp.ap() );
  std::istringstream ex( read_file( ( s.dir / s.expected ).string() ) );
  std::string line;
  while ( std::getline( ex, line ) )
  {
    if ( auto const hash = line.find( '#' ); hash != std::string::npos )
      line.resize( hash );
    line = detail::trim( line );
    if ( line.empty() )
      continue;
    try
    {
      in.expected.push_back( parse_formula( line, in.smp.ap() ) );
    }
    catch ( parse_error const& e )
    {
      throw input_error( s.expected + ": " + e.what() );
    }
  }
  return in;
}

struct suite_result
{
  std::string name;
  bool passed = false;
  learn_outcome outcome;
  std::vector<std::string> found;   /* expected formulas that were matched, with the match kind */
  std::vector<std::string> missing; /* expected formulas that were not */
  std::vector<std::string> learned; /* the solutions, in order */
  double seconds = 0;
};

inline suite_result run_suite( suite_config const& s )
{
  suite_result r;
  r.name = s.name;
  auto const in = load_suite_inputs( s );
  auto opts = s.options;
  opts.deadline = std::chrono::steady_clock::now() + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                                         std::chrono::duration<double>( s.time_limit ) );
  auto const start = std::chrono::steady_clock::now();
  r.outcome = enumerate_solutions( in.smp, in.program, opts, s.command == "learn" ? 1 : s.limit );
  r.seconds = std::chrono::duration<double>( std::chrono::steady_clock::now() - start ).count();

  for ( auto const& sol : r.outcome.solutions )
    r.learned.push_back( to_string( sol.dag, in.smp.ap() ) );
  auto const n = in.smp.ap().size();
  for ( auto const& e : in.expected )
  {
    std::optional<match_kind> hit;
    for ( auto const& sol : r.outcome.solutions )
      if ( auto const m = matches_target( dag_to_formula( sol.dag ), e, n ); m != match_kind::none )
      {
        hit = m;
        break;
      }
    auto const text = to_string( *e, in.smp.ap() );
    if ( hit )
      r.found.push_back( text + ( *hit == match_kind::literal ? " (literal)" : " (semantic)" ) );
    else
      r.missing.push_back( text );
  }
  bool const ran = r.outcome.status == learn_status::solved;
  if ( s.command == "learn" )
    r.passed = ran && !r.found.empty();
  else
    r.passed = ran && r.missing.empty();
  r.passed = r.passed && r.seconds <= s.time_limit;
  return r;
}

/*! \brief Suite directories (those with a suite.json) under `root`, sorted by name. */
inline std::vector<std::filesystem::path> find_suites( std::filesystem::path const& root )
{
  std::vector<std::filesystem::path> out;
  if ( !std::filesystem::is_directory( root ) )
    throw input_error( "no suite directory " + root.string() );
  for ( auto const& e : std::filesystem::directory_iterator( root ) )
    if ( e.is_directory() && std::filesystem::exists( e.path() / "suite.json" ) )
      out.push_back( e.path() );
  std::sort( out.begin(), out.end() );
  return out;
}

} // namespace cltl
