// Internal: JSON text emission with 17-significant-digit reals.
#ifndef TLAB_SRC_JSON_WRITER_HPP
#define TLAB_SRC_JSON_WRITER_HPP

#include "tlab/geometry.hpp"

#include <json.hpp>

#include <string>

namespace tlab::detail {

std::string format_real(double value);

/// Pretty-prints like nlohmann::json::dump(2) but writes every float with
/// %.17g so values round-trip bit-exactly; non-finite floats become strings.
std::string dump_json(const nlohmann::json& doc);

nlohmann::json vector_to_json(const Vector& v);
Vector vector_from_json(const nlohmann::json& j, const char* what);

}  // namespace tlab::detail

#endif  // TLAB_SRC_JSON_WRITER_HPP
