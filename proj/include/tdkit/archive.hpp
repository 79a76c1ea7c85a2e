#pragma once

#include "tdkit/mrp.hpp"
#include "tdkit/representation.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>

namespace tdkit {

/// JSON archive of an MRP (and optionally a representation) so generated
/// instances can be replayed bit-exactly. Layout:
///
///   { "format": "tdkit-mrp/1", "k": .., "gamma": .., "sigma": ..,
///     "initial_state": .., "P": [[..k]..k], "r_mean": [[..k]..k],
///     "p_terminal": [..k], "r_terminal": [..k], "terminal": [bool..k],
///     "representation": { "kind": .., "n": .., "rows": [[..n]..k] },
///     "meta": {..} }
///
/// "terminal" flags the states that can end an episode (p_terminal > 0).
struct MrpArchive {
    Mrp mrp;
    std::optional<Representation> rep;
    nlohmann::json meta = nlohmann::json::object();
};

nlohmann::json to_json(const Mrp& mrp);
Mrp mrp_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Representation& rep);
Representation representation_from_json(const nlohmann::json& j);

nlohmann::json to_json(const MrpArchive& archive);
MrpArchive archive_from_json(const nlohmann::json& j);

void write_archive(const std::filesystem::path& path, const MrpArchive& archive);
MrpArchive read_archive(const std::filesystem::path& path);

/// Writes text to path, creating parent directories.
void write_text_file(const std::filesystem::path& path, const std::string& text);

} // namespace tdkit
