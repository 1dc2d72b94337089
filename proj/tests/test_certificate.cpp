#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "chowid/certificate.hpp"
#include "chowid/pipeline.hpp"
#include "tamper.hpp"

using namespace chowid;

namespace {

std::string reference_path() { return std::string(CHOWID_TEST_DATA) + "/reference_n5_r3.cert"; }

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string replace_line(std::string text, const std::string& prefix, const std::string& line) {
  const auto p = text.find(prefix);
  const auto e = text.find('\n', p);
  return text.replace(p, e - p, line);
}

Certificate small_certificate() {
  CertifyOptions o;
  o.n = 4;
  o.seed = 77;
  return certify(o);
}

}  // namespace

TEST(Certificate, ReferenceParses) {
  const Certificate c = read_certificate_file(reference_path());
  EXPECT_EQ(c.seed, 1591688259u);
  EXPECT_EQ(c.prime, 20201u);
  EXPECT_EQ(c.n, 5u);
  EXPECT_EQ(c.r, 3u);
  ASSERT_EQ(c.points.size(), 3u);
  EXPECT_EQ(c.points[2].forms[2][5], 13016u);
  EXPECT_EQ(c.f0.size(), 8u);
  EXPECT_EQ(c.f0.back(), 19684u);
  EXPECT_EQ(c.tangent, (RankCheck{48, 48}));
  EXPECT_EQ(c.hessian, (RankCheck{15, 15}));
  EXPECT_TRUE(c.verdict);
  EXPECT_FALSE(c.checksum);
  EXPECT_EQ(c.codimension(), 8u);
}

TEST(Certificate, ReferenceVerifies) {
  const VerifyReport rep = verify_file(reference_path());
  EXPECT_TRUE(rep.ok);
  EXPECT_EQ(rep.checksum_status, "absent");
  ASSERT_TRUE(rep.recomputed);
  EXPECT_EQ(rep.recomputed->tangent, (RankCheck{48, 48}));
  ASSERT_TRUE(rep.recomputed->hessian);
  EXPECT_EQ(*rep.recomputed->hessian, (RankCheck{15, 15}));
  EXPECT_LT(rep.seconds, 1.0);
}

TEST(Certificate, FormatParseRoundTrip) {
  const Certificate c = small_certificate();
  const std::string text = format_certificate(c);
  const Certificate back = parse_certificate(text);
  EXPECT_EQ(back.points, c.points);
  EXPECT_EQ(back.f0, c.f0);
  EXPECT_EQ(back.seed, c.seed);
  EXPECT_EQ(back.tangent, c.tangent);
  EXPECT_EQ(back.hessian, c.hessian);
  ASSERT_TRUE(back.checksum);
  EXPECT_EQ(*back.checksum, record_checksum(c));
  EXPECT_EQ(canonical_record(back), canonical_record(c));
  EXPECT_TRUE(verify_text(text).ok);
}

TEST(Certificate, CanonicalRecordIgnoresLayout) {
  const Certificate c = small_certificate();
  std::string text = format_certificate(c);
  // Collapse the alignment padding; the record and checksum are unchanged.
  std::string squeezed;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == ' ' && i + 1 < text.size() && (text[i + 1] == ' ' || (i > 0 && text[i - 1] == '['))) continue;
    squeezed += text[i];
  }
  EXPECT_TRUE(verify_text(squeezed).ok);
}

TEST(Certificate, ParseErrors) {
  const std::string good = slurp(reference_path());
  const auto bad = [&](const std::string& text) {
    EXPECT_THROW(parse_certificate(text), CertificateParseError) << text;
  };
  bad(good + "n = 5\n");
  bad(good + "colour = red\n");
  bad(good + "garbage\n");
  bad(replace_line(good, "prime", "prime = 20200"));
  bad(replace_line(good, "prime", "prime = 101"));
  bad(replace_line(good, "k_0", "k_0 = [1 2 3]"));
  bad(replace_line(good, "k_0", "k_0 = [0 0 0 0 0 0]"));
  bad(replace_line(good, "f_0", "f_0 = [1 2]"));
  bad(replace_line(good, "tangent_rank", "tangent_rank = 48"));
  bad(replace_line(good, "verdict", "verdict = not-4-TWD TRUE"));
  bad(replace_line(good, "verdict", "verdict = maybe"));
  bad(replace_line(good, "r =", "r = 4"));
  bad(replace_line(good, "seed", "seed = -1"));
  std::string missing = good;
  missing.erase(missing.find("m_2"), missing.find('\n', missing.find("m_2")) - missing.find("m_2") + 1);
  bad(missing);
}

TEST(Certificate, CommentsAndBlankLinesIgnored) {
  const std::string good = slurp(reference_path());
  EXPECT_TRUE(verify_text("# header\n\n" + good + "\n# trailer\n").ok);
}

TEST(Certificate, MissingFileReported) {
  const VerifyReport rep = verify_file("/nonexistent/none.cert");
  EXPECT_FALSE(rep.ok);
  EXPECT_FALSE(rep.diffs.empty());
}

TEST(Certificate, ConsistentFalseVerdictIsNotAProof) {
  // A tangent-deficient certificate that honestly says FALSE.
  const std::string good = slurp(reference_path());
  std::string text = replace_line(good, "k_1", "k_1 = [17068 9508 8836 2681 14273 2196]");
  text = replace_line(text, "l_1", "l_1 = [10549 3190 13747 17792 14579 19854]");
  text = replace_line(text, "m_1", "m_1 = [3460 1587 17806 9155 16408 18933]");
  const VerifyReport first = verify_text(text);
  ASSERT_TRUE(first.recomputed);
  EXPECT_LT(first.recomputed->tangent.observed, 48u);
  EXPECT_FALSE(first.ok);
}

TEST(Certificate, TamperedFieldsRejected) {
  const std::string text = format_certificate(small_certificate());
  SeededRng rng(99);
  for (int t = 0; t < 30; ++t) {
    const auto bad = tamper::corrupt(text, rng);
    ASSERT_NE(bad.text, text);
    EXPECT_FALSE(verify_text(bad.text).ok) << bad.description;
  }
}

TEST(Certificate, UnsealedCoordinateEditGoesUnnoticed) {
  // Without the checksum line, a coordinate edit keeps the ranks generic.
  // This is why certify seals its output.
  const std::string good = slurp(reference_path());
  const std::string edited = replace_line(good, "k_0", "k_0 = [17069 9508 8836 2681 14273 2196]");
  EXPECT_TRUE(verify_text(edited).ok);
}
