#pragma once

#include <filesystem>
#include <string_view>

namespace inrr::tasks {

/// Writes `contents` to `path` via a sibling temp file and rename, creating
/// parent directories as needed. Throws inrr::Error on I/O failure.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace inrr::tasks
