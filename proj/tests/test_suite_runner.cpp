#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "jsw/frontend.hpp"
#include "jsw/json_io.hpp"

using namespace jsw;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

// Each bundled file follows the official layout: an array of groups, each
// with a schema and (data, valid) test pairs. Every included case must match.
TEST_CASE("JSON Schema Test Suite subset (draft 6)") {
    std::filesystem::path dir = std::filesystem::path(JSW_TEST_DATA_DIR) / "draft6";
    REQUIRE(std::filesystem::exists(dir));
    size_t files = 0, cases = 0;
    std::vector<std::filesystem::path> paths;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.path().extension() == ".json") paths.push_back(entry.path());
    }
    std::sort(paths.begin(), paths.end());
    for (const auto& path : paths) {
        ++files;
        JsonValue doc = parse_json(slurp(path));
        for (const auto& group : doc.as_array()) {
            const JsonValue* schema = group.find("schema");
            const JsonValue* tests = group.find("tests");
            REQUIRE(schema);
            REQUIRE(tests);
            Environment env;
            try {
                env = std::move(load_schema(*schema).env);
            } catch (const std::exception& e) {
                FAIL(path.filename().string(), ": ", group.find("description")->as_string(),
                     ": schema failed to load: ", e.what());
                continue;
            }
            for (const auto& test : tests->as_array()) {
                const JsonValue* data = test.find("data");
                bool expected = test.find("valid")->as_bool();
                bool got = validate(*data, env);
                ++cases;
                if (got != expected) {
                    FAIL_CHECK(path.filename().string(), ": ",
                               group.find("description")->as_string(), " / ",
                               test.find("description")->as_string(), ": expected ",
                               expected, " got ", got);
                }
            }
        }
    }
    CHECK(files >= 25);
    CHECK(cases >= 300);
    MESSAGE("suite files: ", files, ", cases: ", cases);
}
