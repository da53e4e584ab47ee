#ifndef OTI_KL_H_
#define OTI_KL_H_

namespace oti {

// KL(Bernoulli(p) || Bernoulli(q)) in nats, with 0 log 0 = 0. Returns +inf
// when q is 0 or 1 and p differs from q. Throws DomainError outside [0, 1].
double kl_bernoulli(double p, double q);

}  // namespace oti

#endif  // OTI_KL_H_
