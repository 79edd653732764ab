#pragma once

#include <map>
#include <optional>
#include <string>

#include "csent/state.hpp"

namespace csent {

struct StateFileMeta {
    std::string family;
    std::map<std::string, double> params;
};

// Versioned text format: JSON with fields version / layout / matrix and an
// optional metadata block; unknown fields are rejected. Numbers are written
// with 17 significant digits so parse(serialize(s)) reproduces every entry
// exactly.
std::string serialize_state(const MultipartiteState& s,
                            const std::optional<StateFileMeta>& meta = std::nullopt);

// Throws ParseError (with position info) on malformed input and
// ValidationError when the parsed matrix fails the state invariants.
MultipartiteState parse_state(const std::string& text,
                              std::optional<StateFileMeta>* meta = nullptr);

void write_state_file(const std::string& path, const MultipartiteState& s,
                      const std::optional<StateFileMeta>& meta = std::nullopt);
MultipartiteState read_state_file(const std::string& path,
                                  std::optional<StateFileMeta>* meta = nullptr);

} // namespace csent
