/*!
  \file io.hpp
  \brief Trace files and constraint loading

  A trace file has up to three blocks separated by a line `---`: positive
  traces, negative traces and an optional comma-separated list of proposition
  names (default p0, p1, ...). A trace is one line such as `0,0;1,0;0,1::1`:
  states separated by `;`, one 0/1 value per proposition, and an optional
  `::k` loop start (default: the last state). `#` starts a comment.
*/

#pragma once

#include "constraint/parser.hpp"
#include "constraint/prelude.hpp"
#include "trace.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace cltl
{

class input_error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

namespace detail
{

inline std::string trim( std::string_view s )
{
  auto const b = s.find_first_not_of( " \t\r" );
  if ( b == std::string_view::npos )
    return {};
  auto const e = s.find_last_not_of( " \t\r" );
  return std::string( s.substr( b, e - b + 1 ) );
}

inline std::vector<std::string> split( std::string_view s, char sep )
{
  std::vector<std::string> out;
  std::size_t start = 0;
  while ( true )
  {
    auto const pos = s.find( sep, start );
    out.push_back( trim( s.substr( start, pos == std::string_view::npos ? std::string_view::npos : pos - start ) ) );
    if ( pos == std::string_view::npos )
      break;
    start = pos + 1;
  }
  return out;
}

} // namespace detail

struct parsed_trace
{
  std::vector<state> states;
  std::size_t loop_start = 0;
};

/*! \brief Parses one trace line; `width` is checked when nonzero. */
inline parsed_trace parse_trace_line( std::string_view text, std::size_t width = 0 )
{
  parsed_trace out;
  std::string body( text );
  std::optional<std::size_t> loop;
  if ( auto const pos = body.find( "::" ); pos != std::string::npos )
  {
    auto const k = detail::trim( body.substr( pos + 2 ) );
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars( k.data(), k.data() + k.size(), value );
    if ( k.empty() || ec != std::errc{} || ptr != k.data() + k.size() )
      throw input_error( "bad loop start '" + k + "'" );
    loop = value;
    body.resize( pos );
  }
  for ( auto const& st : detail::split( body, ';' ) )
  {
    state s;
    for ( auto const& bit : detail::split( st, ',' ) )
    {
      if ( bit != "0" && bit != "1" )
        throw input_error( "bad state value '" + bit + "' (expected 0 or 1)" );
      s.push_back( bit == "1" );
    }
    if ( width && s.size() != width )
      throw input_error( "state has " + std::to_string( s.size() ) + " values, expected " + std::to_string( width ) );
    if ( !out.states.empty() && s.size() != out.states.front().size() )
      throw input_error( "states of one trace differ in width" );
    out.states.push_back( std::move( s ) );
  }
  out.loop_start = loop.value_or( out.states.size() - 1 );
  if ( out.loop_start >= out.states.size() )
    throw input_error( "loop start " + std::to_string( out.loop_start ) + " is outside the trace of length " +
                       std::to_string( out.states.size() ) );
  return out;
}

inline sample parse_trace_file( std::string const& text )
{
  struct line
  {
    std::size_t number;
    std::string text;
  };
  std::vector<std::vector<line>> blocks( 1 );
  std::istringstream in( text );
  std::string raw;
  std::size_t number = 0;
  while ( std::getline( in, raw ) )
  {
    ++number;
    if ( auto const hash = raw.find( '#' ); hash != std::string::npos )
      raw.resize( hash );
    auto const t = detail::trim( raw );
    if ( t.empty() )
      continue;
    if ( t == "---" )
    {
      blocks.emplace_back();
      continue;
    }
    blocks.back().push_back( { number, t } );
  }
  if ( blocks.size() > 3 )
    throw input_error( "trace file has more than three blocks" );

  auto at = [&]( std::size_t n, std::string const& msg ) { return input_error( "line " + std::to_string( n ) + ": " + msg ); };

  std::optional<prop_list> ap;
  if ( blocks.size() == 3 )
  {
    std::vector<std::string> names;
    for ( auto const& l : blocks[2] )
      for ( auto const& n : detail::split( l.text, ',' ) )
        if ( !n.empty() )
          names.push_back( n );
    try
    {
      ap = prop_list( names );
    }
    catch ( parse_error const& e )
    {
      throw at( blocks[2].empty() ? number : blocks[2].front().number, e.what() );
    }
  }

  std::size_t width = ap ? ap->size() : 0;
  std::vector<lasso_trace> sets[2];
  for ( std::size_t b = 0; b < 2 && b < blocks.size(); ++b )
    for ( auto const& l : blocks[b] )
    {
      try
      {
        auto t = parse_trace_line( l.text, width );
        width = t.states.front().size();
        sets[b].emplace_back( width, std::move( t.states ), t.loop_start );
      }
      catch ( std::exception const& e )
      {
        throw at( l.number, e.what() );
      }
    }

  if ( !ap )
  {
    if ( width == 0 )
      throw input_error( "no traces and no proposition names: cannot tell which propositions exist" );
    std::vector<std::string> names;
    for ( std::size_t i = 0; i < width; ++i )
      names.push_back( "p" + std::to_string( i ) );
    ap = prop_list( names );
  }
  if ( ap->size() == 0 )
    throw input_error( "the proposition list is empty" );
  try
  {
    return sample( *ap, std::move( sets[0] ), std::move( sets[1] ) );
  }
  catch ( std::invalid_argument const& e )
  {
    throw input_error( e.what() );
  }
}

inline std::string format_trace( lasso_trace const& t )
{
  std::string out;
  for ( std::size_t k = 0; k < t.length(); ++k )
  {
    if ( k )
      out += ';';
    for ( std::size_t p = 0; p < t.num_props(); ++p )
    {
      if ( p )
        out += ',';
      out += t.value( k, static_cast<uint32_t>( p ) ) ? '1' : '0';
    }
  }
  return out + "::" + std::to_string( t.loop_start() );
}

inline std::string format_trace_file( sample const& s )
{
  std::string out;
  for ( auto const& t : s.positives() )
    out += format_trace( t ) + "\n";
  out += "---\n";
  for ( auto const& t : s.negatives() )
    out += format_trace( t ) + "\n";
  out += "---\n";
  auto const names = s.ap().names();
  for ( std::size_t i = 0; i < names.size(); ++i )
    out += ( i ? "," : "" ) + names[i];
  return out + "\n";
}

inline std::string read_file( std::string const& path )
{
  std::ifstream in( path, std::ios::binary );
  if ( !in )
    throw input_error( "cannot read " + path );
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file( std::string const& path, std::string const& text )
{
  std::ofstream out( path, std::ios::binary );
  if ( !out || !( out << text ) )
    throw input_error( "cannot write " + path );
}

/*! \brief Parses each constraint text and preset separately and merges them into one program. */
inline constraint::program load_program( std::vector<std::pair<std::string, std::string>> const& named_texts,
                                         std::vector<std::string> const& presets, prop_list const& ap )
{
  /* presets come first so that files may refer to their named nodes */
  std::vector<constraint::program> parts;
  for ( auto const& p : presets )
  {
    try
    {
      parts.push_back( constraint::preset( p, ap ) );
    }
    catch ( std::invalid_argument const& e )
    {
      throw input_error( e.what() );
    }
  }
  for ( auto const& [name, text] : named_texts )
  {
    try
    {
      auto const context = constraint::merge_programs( parts, ap );
      parts.push_back( constraint::parse_constraints( text, ap, context ) );
    }
    catch ( parse_error const& e )
    {
      throw input_error( name + ":" + e.what() );
    }
  }
  try
  {
    return constraint::merge_programs( parts, ap );
  }
  catch ( parse_error const& e )
  {
    throw input_error( std::string( "merging constraints: " ) + e.what() );
  }
}

} // namespace cltl
