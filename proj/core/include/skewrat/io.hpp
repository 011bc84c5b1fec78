#pragma once

#include <cstdint>
#include <string>

#include "skewrat/analysis.hpp"
#include "skewrat/cocycle.hpp"
#include "skewrat/genfun.hpp"
#include "skewrat/mcf.hpp"
#include "skewrat/rat.hpp"
#include "skewrat/visits.hpp"

namespace skewrat::io {

// {"prefix":[...], "tail":[...]}; either key may be absent.
mcf::DigitSequence digits_from_json(const std::string& text);
std::string digits_to_json(const mcf::DigitSequence& digits);

std::string block_csv(const cocycle::SymbolBlock& block);  // one symbol per line
std::string block_rle(const cocycle::SymbolBlock& block);  // value xrun, comma separated

std::string visits_csv(const visits::VisitDistribution& dist);  // nu,count
std::string poly_csv(const genfun::LaurentPoly& poly);          // exponent,num,den
std::string law_csv(const genfun::TemporalLaw& law);            // nu,num,den
// theta,abs pairs of |poly(e^{i theta})| for plotting.
std::string eval_trace_csv(const genfun::LaurentPoly& poly, int samples);

// Full renormalization frame, resumable.
std::string frame_to_json(const visits::Frame& frame);
visits::Frame frame_from_json(const std::string& text);

// RAT corpus: JSON list of {a, b, p} atom lists.
std::string rats_to_json(const std::vector<rat::FlipRat>& seq);
std::vector<rat::FlipRat> rats_from_json(const std::string& text);

std::string railways_csv(const std::vector<analysis::RailwaysRow>& rows);
std::string wrllt_csv(const std::vector<analysis::WrlltRow>& rows);
std::string clt_csv(const std::vector<analysis::CltRow>& rows);

// FNV-1a over the canonical config string.
std::uint64_t config_hash(const std::string& canonical);
std::string manifest_json(const std::string& canonical_config, double wall_ms);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace skewrat::io
