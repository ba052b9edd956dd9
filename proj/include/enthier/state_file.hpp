#pragma once

#include "enthier/certificate.hpp"
#include "enthier/error.hpp"
#include "enthier/qstate.hpp"

#include <optional>
#include <string>
#include <string_view>

// JSON state files:
//   {"dims": [..], "amps": [{"idx": [..], "re": x, "im": y}, ..], "metadata": {..}}
// Serialization is canonical: sorted idx, nonzero amplitudes only, 17
// significant digits, so write -> read -> write is byte-identical.
namespace enthier {

class ParseError : public Error {
public:
    using Error::Error;
};

struct StateMetadata {
    std::string family;
    std::string params;
    std::optional<Certificate> certificate;
};

struct StateFile {
    PureState state;
    std::optional<StateMetadata> metadata;
};

std::string serialize_state(const PureState& psi, const std::optional<StateMetadata>& meta = std::nullopt);

/// Throws ParseError naming the offending location. Norms within 1e-9 of one
/// are kept bit-exact; within 1e-6 (or any nonzero norm with `normalize`) they
/// are rescaled; anything else is rejected.
StateFile parse_state(std::string_view text, bool normalize = false);

StateFile read_state_file(const std::string& path, bool normalize = false);
void write_state_file(const std::string& path, const PureState& psi,
                      const std::optional<StateMetadata>& meta = std::nullopt);

}  // namespace enthier
