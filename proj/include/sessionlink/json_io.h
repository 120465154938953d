#ifndef SESSIONLINK_JSON_IO_H_
#define SESSIONLINK_JSON_IO_H_

#include "json.hpp"
#include "sessionlink/corpus.h"

namespace sessionlink {

// Visit encoding shared by trial and obfuscated-trial files. Absent channels
// are omitted.
nlohmann::json VisitToJson(const PageVisit& visit);
PageVisit VisitFromJson(const nlohmann::json& j);

// Doubles are written with enough digits to round-trip exactly.
std::string FormatDouble(double value);

}  // namespace sessionlink

#endif  // SESSIONLINK_JSON_IO_H_
