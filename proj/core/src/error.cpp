#include "bbibp/error.hpp"

namespace bbibp {

NonFinitePathError::NonFinitePathError(std::size_t path_index, const std::string& what)
    : NonFiniteError(what + " (path " + std::to_string(path_index) + ")"), path_index_(path_index) {}

}  // namespace bbibp
