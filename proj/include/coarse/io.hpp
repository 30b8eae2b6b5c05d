#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "coarse/approximation.hpp"
#include "coarse/covers.hpp"
#include "coarse/embedding.hpp"
#include "coarse/metric.hpp"
#include "coarse/spectral.hpp"

namespace coarse {

using Json = nlohmann::ordered_json;

// Parse errors carry the byte offset and are raised as ErrorKind::Parse;
// well-formed documents with the wrong shape are ErrorKind::Parse as well.
Json parse_json(const std::string& text, const std::string& origin = "input");
Json read_json_file(const std::string& path);
std::string read_text_file(const std::string& path);
// Creates parent directories. Output ends with a newline.
void write_text_file(const std::string& path, const std::string& text);
void write_json_file(const std::string& path, const Json& doc);

// {"n", "edges", "degree"}
Json graph_to_json(const Graph& g);
Graph graph_from_json(const Json& doc);

// {"points", "dist", "base"}
Json metric_to_json(const FiniteMetricSpace& X);
FiniteMetricSpace metric_from_json(const Json& doc);

// {"lambda", "sets"}; sets hold point ids.
Json cover_to_json(const FiniteMetricSpace& X, const Cover& cover);
Cover cover_from_json(const FiniteMetricSpace& X, const Json& doc);

// Face list (generators and all faces with their point carriers).
Json nerve_to_json(const FiniteMetricSpace& X, const Nerve& nerve);
// OFF text: vertices on the moment curve, one polygon per triangle or maximal edge.
std::string nerve_to_off(const Nerve& nerve);

// {"metric": "uniform", "lambda", "simplices"} or {"metric": "c0", "levels": {vertex: i}, "simplices"}.
Json complex_to_json(const MetricComplex& K);
MetricComplex complex_from_json(const Json& doc);

// {"domain", "codomain", "images": [[[v, w], ...], ...]}
Json point_to_json(const ComplexPoint& p);
ComplexPoint point_from_json(const Json& doc);
Json plmap_to_json(const PLMap& f);
PLMap plmap_from_json(const Json& doc);

Json cheeger_to_json(const CheegerResult& h);
Json spectral_report_json(const Graph& g, const Spectrum& sp, const CheegerResult& h);

// {"dim", "vectors": {id: [...]}, "provenance"}
Json cloud_to_json(const EmbeddedCloud& cloud);
EmbeddedCloud cloud_from_json(const Json& doc);

// Fixed 17 significant digits, so reruns are byte-identical and values round-trip.
std::string format_real(double x);

std::string profile_csv(const CompressionProfile& profile);
std::string verdict_csv(const std::vector<AuditRow>& rows);
// rows = points, columns = cover indices
std::string projection_csv(const FiniteMetricSpace& X, const NerveProjection& p);
std::string family_csv(const ExpanderFamily& family);

}  // namespace coarse
