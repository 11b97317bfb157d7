#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "ecorank/core.hpp"

namespace ecorank {

// Canonical matrix file ("edge list, version 1"):
//
//   #ecorank-matrix v1 year=<int|none>
//   "<country>"<TAB>"<product>"
//
// one line per link. Other '#' lines and blank lines are ignored. Node
// order is order of first appearance; isolated nodes cannot be stored.

inline constexpr const char* kMatrixMagic = "#ecorank-matrix v1";
inline constexpr const char* kScoresMagic = "#ecorank-scores v1";
inline constexpr const char* kRankingMagic = "#ecorank-ranking v1";

void write_matrix(std::ostream& out, const BipartiteMatrix& m);
BipartiteMatrix read_matrix(std::istream& in);

void save_matrix(const std::filesystem::path& path, const BipartiteMatrix& m);
BipartiteMatrix load_matrix(const std::filesystem::path& path);

/// Plain PBM (P1), one pixel per cell, rows are countries, 1 = black.
void write_pbm(std::ostream& out, const BipartiteMatrix& m);

struct ScoreFile {
  ScoreVector scores;
  Direction direction = Direction::high_is_good;
};

/// Header comment lines followed by `"<label>"<TAB><score>` per node, with
/// scores printed as shortest round-trip decimals.
void write_scores(std::ostream& out, const ScoreVector& scores, Direction direction);
ScoreFile read_scores(std::istream& in);

void save_scores(const std::filesystem::path& path, const ScoreVector& scores, Direction direction);
ScoreFile load_scores(const std::filesystem::path& path);

/// `<position><TAB><tie group><TAB>"<label>"` per node, best first. Nodes
/// sharing a tie group number have exactly equal scores.
void write_ranking(std::ostream& out, const Ranking& ranking);

/// Quoted label as written in every file format. Throws InvalidArgument
/// for labels containing quotes, tabs or line breaks.
std::string quote_label(const std::string& label);

/// Writes `content` to `path`, throwing DataError on failure.
void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace ecorank
