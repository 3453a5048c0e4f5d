#ifndef COMBFORGE_SERIALIZATION_HPP
#define COMBFORGE_SERIALIZATION_HPP

#include <string>

#include "combforge/channel.hpp"
#include "combforge/entropy.hpp"
#include "combforge/realization.hpp"
#include "combforge/reversal.hpp"

namespace combforge {

// Matrix files carry {"row_layout": [["label", dim], ...], "col_layout":
// [...], "entries": [[re, im], ...]} row-major; reals are written with 17
// significant digits so files round-trip bit-exactly.

std::string to_json(const ComplexMatrix& m);
std::string to_json(const HermitianOperator& h);
std::string to_json(const Channel& c);
std::string to_json(const StrategyOperator& s);
std::string to_json(const UnitaryRealization& r);
std::string to_json(const ReversalResult& r,
                    const std::string& reversed_strategy_file);
std::string to_json(const EntropyReport& r);
std::string to_json(const SdpProblem& p);
std::string to_json(const SdpSolution& s);

ComplexMatrix matrix_from_json(const std::string& text);
HermitianOperator hermitian_from_json(const std::string& text);
Channel channel_from_json(const std::string& text);
StrategyOperator strategy_from_json(const std::string& text);
UnitaryRealization realization_from_json(const std::string& text);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

// %.17g formatting used across all JSON output.
std::string format_real(double x);

}  // namespace combforge

#endif
